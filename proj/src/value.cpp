#include "unitrans/value.hpp"

#include <charconv>
#include <cmath>
#include <limits>

namespace unitrans {

namespace {

bool fits_int32(std::int64_t v) {
    return v >= std::numeric_limits<std::int32_t>::min() &&
           v <= std::numeric_limits<std::int32_t>::max();
}

std::string escape_double_quoted(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
            case '\\': out += "\\\\"; break;
            case '"': out += "\\\""; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default: out += c; break;
        }
    }
    out += '"';
    return out;
}

std::string escape_single_quoted(const std::string& s) {
    std::string out = "'";
    for (char c : s) {
        switch (c) {
            case '\\': out += "\\\\"; break;
            case '\'': out += "\\'"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default: out += c; break;
        }
    }
    out += '\'';
    return out;
}

const char* kind_label(Value::Kind k) {
    switch (k) {
        case Value::Kind::integer: return "int";
        case Value::Kind::real: return "float";
        case Value::Kind::boolean: return "bool";
        case Value::Kind::string: return "string";
        case Value::Kind::list: return "list";
        case Value::Kind::none: return "none";
    }
    return "?";
}

}  // namespace

std::string format_real(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    std::string s(buf, res.ptr);
    if (s.find('.') == std::string::npos && s.find('e') == std::string::npos &&
        s.find("inf") == std::string::npos && s.find("nan") == std::string::npos) {
        s += ".0";
    }
    return s;
}

Value Value::of_int(std::int64_t v) {
    Value out;
    out.kind_ = Kind::integer;
    out.payload_ = v;
    return out;
}

Value Value::of_real(double v) {
    if (!std::isfinite(v)) throw ArgumentError("real test-case values must be finite");
    Value out;
    out.kind_ = Kind::real;
    out.payload_ = v;
    return out;
}

Value Value::of_bool(bool v) {
    Value out;
    out.kind_ = Kind::boolean;
    out.payload_ = v;
    return out;
}

Value Value::of_string(std::string v) {
    Value out;
    out.kind_ = Kind::string;
    out.payload_ = std::move(v);
    return out;
}

Value Value::of_list(std::vector<Value> items) {
    for (const Value& item : items) {
        if (item.kind_ != items.front().kind_) {
            throw ArgumentError("list values must be homogeneous in element kind");
        }
    }
    Value out;
    out.kind_ = Kind::list;
    out.payload_ = std::move(items);
    return out;
}

Value Value::none() { return Value(); }

std::int64_t Value::as_int() const {
    if (kind_ != Kind::integer) throw ArgumentError("value is not an integer");
    return std::get<std::int64_t>(payload_);
}

double Value::as_real() const {
    if (kind_ != Kind::real) throw ArgumentError("value is not a real");
    return std::get<double>(payload_);
}

bool Value::as_bool() const {
    if (kind_ != Kind::boolean) throw ArgumentError("value is not a boolean");
    return std::get<bool>(payload_);
}

const std::string& Value::as_string() const {
    if (kind_ != Kind::string) throw ArgumentError("value is not a string");
    return std::get<std::string>(payload_);
}

const std::vector<Value>& Value::as_list() const {
    if (kind_ != Kind::list) throw ArgumentError("value is not a list");
    return std::get<std::vector<Value>>(payload_);
}

Value::Kind Value::element_kind() const {
    const auto& items = as_list();
    return items.empty() ? Kind::none : items.front().kind();
}

std::string Value::canonical() const {
    switch (kind_) {
        case Kind::integer: return std::to_string(as_int());
        case Kind::real: return format_real(as_real());
        case Kind::boolean: return as_bool() ? "true" : "false";
        case Kind::string: return escape_double_quoted(as_string());
        case Kind::list: {
            std::string out = "[";
            const auto& items = as_list();
            for (std::size_t i = 0; i < items.size(); ++i) {
                if (i) out += ',';
                out += items[i].canonical();
            }
            out += ']';
            return out;
        }
        case Kind::none: return "null";
    }
    return "null";
}

std::string Value::render_literal(Language lang) const {
    switch (kind_) {
        case Kind::integer: {
            std::string s = std::to_string(as_int());
            if (!fits_int32(as_int())) {
                if (lang == Language::java) s += "L";
                if (lang == Language::cpp) s += "LL";
            }
            return s;
        }
        case Kind::real:
            return format_real(as_real());
        case Kind::boolean:
            if (lang == Language::python) return as_bool() ? "True" : "False";
            return as_bool() ? "true" : "false";
        case Kind::string:
            if (lang == Language::python) return escape_single_quoted(as_string());
            return escape_double_quoted(as_string());
        case Kind::list: {
            const auto& items = as_list();
            std::string out = lang == Language::python ? "[" : "{";
            for (std::size_t i = 0; i < items.size(); ++i) {
                if (i) out += ", ";
                out += items[i].render_literal(lang);
            }
            out += lang == Language::python ? ']' : '}';
            return out;
        }
        case Kind::none:
            throw UnsupportedTypeError("the none kind has no literal form in the type table");
    }
    throw UnsupportedTypeError("unrenderable value kind");
}

std::string Value::type_name(Language lang) const {
    if (lang == Language::python) {
        throw ArgumentError("Python values carry no type decoration");
    }
    const bool java = lang == Language::java;
    switch (kind_) {
        case Kind::integer:
            if (fits_int32(as_int())) return "int";
            return java ? "long" : "long long";
        case Kind::real:
            return "double";
        case Kind::boolean:
            return java ? "boolean" : "bool";
        case Kind::string:
            return java ? "String" : "std::string";
        case Kind::list: {
            const auto& items = as_list();
            if (items.empty()) {
                throw UnsupportedTypeError("cannot infer the element type of an empty list");
            }
            switch (element_kind()) {
                case Kind::integer: {
                    bool wide = false;
                    for (const Value& v : items) wide = wide || !fits_int32(v.as_int());
                    if (java) return wide ? "long[]" : "int[]";
                    return wide ? "std::vector<long long>" : "std::vector<int>";
                }
                case Kind::real:
                    return java ? "double[]" : "std::vector<double>";
                case Kind::string:
                    return java ? "String[]" : "std::vector<std::string>";
                default:
                    throw UnsupportedTypeError(
                        std::string("list of ") + kind_label(element_kind()) +
                        " has no mapping in the type table");
            }
        }
        case Kind::none:
            throw UnsupportedTypeError("the none kind has no mapping in the type table");
    }
    throw UnsupportedTypeError("unmappable value kind");
}

nlohmann::json Value::to_json() const {
    switch (kind_) {
        case Kind::integer: return as_int();
        case Kind::real: return as_real();
        case Kind::boolean: return as_bool();
        case Kind::string: return as_string();
        case Kind::list: {
            nlohmann::json arr = nlohmann::json::array();
            for (const Value& v : as_list()) arr.push_back(v.to_json());
            return arr;
        }
        case Kind::none: return nullptr;
    }
    return nullptr;
}

Value Value::from_json(const nlohmann::json& j) {
    using nlohmann::json;
    switch (j.type()) {
        case json::value_t::number_integer:
            return of_int(j.get<std::int64_t>());
        case json::value_t::number_unsigned: {
            auto u = j.get<std::uint64_t>();
            if (u > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
                throw ParseError("integer value out of 64-bit signed range");
            }
            return of_int(static_cast<std::int64_t>(u));
        }
        case json::value_t::number_float: {
            double d = j.get<double>();
            if (!std::isfinite(d)) throw ParseError("non-finite real value");
            return of_real(d);
        }
        case json::value_t::boolean:
            return of_bool(j.get<bool>());
        case json::value_t::string:
            return of_string(j.get<std::string>());
        case json::value_t::null:
            return none();
        case json::value_t::array: {
            std::vector<Value> items;
            items.reserve(j.size());
            bool any_real = false;
            bool any_int = false;
            for (const auto& el : j) {
                Value v = from_json(el);
                any_real = any_real || v.kind() == Kind::real;
                any_int = any_int || v.kind() == Kind::integer;
                items.push_back(std::move(v));
            }
            // Numeric lists may mix int and float spellings; promote to real.
            if (any_real && any_int) {
                for (Value& v : items) {
                    if (v.kind() == Kind::integer) {
                        v = of_real(static_cast<double>(v.as_int()));
                    }
                }
            }
            for (const Value& v : items) {
                if (v.kind() != items.front().kind()) {
                    throw ParseError("heterogeneous list is outside the value domain");
                }
            }
            return of_list(std::move(items));
        }
        default:
            throw ParseError("JSON value outside the test-case value domain");
    }
}

bool Value::operator==(const Value& other) const {
    if (kind_ != other.kind_) return false;
    return payload_ == other.payload_;
}

}  // namespace unitrans
