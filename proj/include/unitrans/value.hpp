#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "unitrans/errors.hpp"
#include "unitrans/language.hpp"

namespace unitrans {

/// A dynamically typed test-case value: scalar, string, or homogeneous list.
class Value {
public:
    enum class Kind { integer, real, boolean, string, list, none };

    Value() : kind_(Kind::none) {}
    static Value of_int(std::int64_t v);
    static Value of_real(double v);  // throws ArgumentError if non-finite
    static Value of_bool(bool v);
    static Value of_string(std::string v);
    static Value of_list(std::vector<Value> items);  // throws if heterogeneous
    static Value none();

    Kind kind() const { return kind_; }
    bool is_none() const { return kind_ == Kind::none; }

    std::int64_t as_int() const;
    double as_real() const;
    bool as_bool() const;
    const std::string& as_string() const;
    const std::vector<Value>& as_list() const;

    /// Element kind of a list; Kind::none for an empty list.
    Kind element_kind() const;

    /// Canonical serialized form: compact, language-neutral, deterministic.
    /// Used for deduplication keys and diagnostics.
    std::string canonical() const;

    /// Render as a legal literal expression of the given language.
    /// Lists render as "[...]" for Python and "{...}" for Java/C++.
    /// Throws UnsupportedTypeError for kinds outside the type table.
    std::string render_literal(Language lang) const;

    /// Target-language type name per the type-mapping table.
    /// Integers widen to long/long long when the value (or any list element)
    /// exceeds 32-bit range. Throws UnsupportedTypeError when unmapped.
    std::string type_name(Language lang) const;

    nlohmann::json to_json() const;
    /// Throws ParseError for JSON shapes outside the Value domain
    /// (objects, non-finite numbers, heterogeneous arrays).
    static Value from_json(const nlohmann::json& j);

    bool operator==(const Value& other) const;

private:
    Kind kind_;
    std::variant<std::monostate, std::int64_t, double, bool, std::string,
                 std::vector<Value>>
        payload_;
};

/// Render a double so it round-trips and always reads as a real
/// (a '.' or exponent is guaranteed).
std::string format_real(double v);

}  // namespace unitrans
