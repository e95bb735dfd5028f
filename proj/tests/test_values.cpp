#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "unitrans/language.hpp"
#include "unitrans/value.hpp"

using namespace unitrans;

TEST_CASE("language metadata") {
    CHECK(display_name(Language::python) == "Python");
    CHECK(display_name(Language::java) == "Java");
    CHECK(display_name(Language::cpp) == "C++");
    CHECK(comment_symbol(Language::python) == "#");
    CHECK(comment_symbol(Language::java) == "//");
    CHECK(comment_symbol(Language::cpp) == "//");
    CHECK(!statically_typed(Language::python));
    CHECK(statically_typed(Language::java));
    CHECK(statically_typed(Language::cpp));

    for (Language lang : kAllLanguages) {
        CHECK(language_from_tag(tag(lang)) == lang);
    }
    CHECK_THROWS_AS(language_from_tag("rust"), ArgumentError);
    CHECK_THROWS_AS(language_from_tag(""), ArgumentError);
}

TEST_CASE("format_real keeps doubles round-trippable and unambiguous") {
    CHECK(format_real(3.5) == "3.5");
    CHECK(format_real(3.0) == "3.0");
    CHECK(format_real(-2.0) == "-2.0");
    CHECK(format_real(0.1) == "0.1");

    const double samples[] = {0.0,     -0.0,   1.0 / 3.0, 6.02e23, -1.5e-8,
                              12345.0, 2.5e-3, 9007199254740993.0};
    for (double v : samples) {
        std::string s = format_real(v);
        CHECK(std::stod(s) == v);
        bool marked = s.find('.') != std::string::npos || s.find('e') != std::string::npos;
        CHECK_MESSAGE(marked, "missing real marker in ", s);
    }
}

TEST_CASE("value factories enforce the domain") {
    CHECK_THROWS_AS(Value::of_real(std::numeric_limits<double>::infinity()), ArgumentError);
    CHECK_THROWS_AS(Value::of_real(std::nan("")), ArgumentError);
    CHECK_THROWS_AS(Value::of_list({Value::of_int(1), Value::of_string("x")}), ArgumentError);
    CHECK(Value().is_none());
    CHECK(Value::none().kind() == Value::Kind::none);
    CHECK(Value::of_list({}).as_list().empty());
    CHECK(Value::of_list({}).element_kind() == Value::Kind::none);
}

TEST_CASE("literals render per language") {
    Value i = Value::of_int(3);
    CHECK(i.render_literal(Language::python) == "3");
    CHECK(i.render_literal(Language::java) == "3");
    CHECK(i.render_literal(Language::cpp) == "3");

    Value wide = Value::of_int(3000000000LL);
    CHECK(wide.render_literal(Language::python) == "3000000000");
    CHECK(wide.render_literal(Language::java) == "3000000000L");
    CHECK(wide.render_literal(Language::cpp) == "3000000000LL");

    Value b = Value::of_bool(true);
    CHECK(b.render_literal(Language::python) == "True");
    CHECK(b.render_literal(Language::java) == "true");
    CHECK(b.render_literal(Language::cpp) == "true");

    Value s = Value::of_string("he said \"hi\"\n");
    CHECK(s.render_literal(Language::python) == "'he said \"hi\"\\n'");
    CHECK(s.render_literal(Language::java) == "\"he said \\\"hi\\\"\\n\"");

    Value xs = Value::of_list({Value::of_int(1), Value::of_int(2)});
    CHECK(xs.render_literal(Language::python) == "[1, 2]");
    CHECK(xs.render_literal(Language::java) == "{1, 2}");
    CHECK(xs.render_literal(Language::cpp) == "{1, 2}");
    CHECK(Value::of_list({}).render_literal(Language::python) == "[]");
    CHECK(Value::of_list({}).render_literal(Language::cpp) == "{}");

    CHECK_THROWS_AS(Value::none().render_literal(Language::python), UnsupportedTypeError);
}

TEST_CASE("type decorations follow the mapping table") {
    CHECK(Value::of_int(7).type_name(Language::java) == "int");
    CHECK(Value::of_int(7).type_name(Language::cpp) == "int");
    CHECK(Value::of_int(1LL << 40).type_name(Language::java) == "long");
    CHECK(Value::of_int(1LL << 40).type_name(Language::cpp) == "long long");
    CHECK(Value::of_int(-(1LL << 40)).type_name(Language::java) == "long");
    CHECK(Value::of_real(0.5).type_name(Language::java) == "double");
    CHECK(Value::of_real(0.5).type_name(Language::cpp) == "double");
    CHECK(Value::of_bool(false).type_name(Language::java) == "boolean");
    CHECK(Value::of_bool(false).type_name(Language::cpp) == "bool");
    CHECK(Value::of_string("x").type_name(Language::java) == "String");
    CHECK(Value::of_string("x").type_name(Language::cpp) == "std::string");

    Value ints = Value::of_list({Value::of_int(1), Value::of_int(2)});
    CHECK(ints.type_name(Language::java) == "int[]");
    CHECK(ints.type_name(Language::cpp) == "std::vector<int>");

    Value mixed_width = Value::of_list({Value::of_int(1), Value::of_int(1LL << 40)});
    CHECK(mixed_width.type_name(Language::java) == "long[]");
    CHECK(mixed_width.type_name(Language::cpp) == "std::vector<long long>");

    Value reals = Value::of_list({Value::of_real(1.5)});
    CHECK(reals.type_name(Language::java) == "double[]");
    CHECK(reals.type_name(Language::cpp) == "std::vector<double>");

    Value strs = Value::of_list({Value::of_string("a")});
    CHECK(strs.type_name(Language::java) == "String[]");
    CHECK(strs.type_name(Language::cpp) == "std::vector<std::string>");

    CHECK_THROWS_AS(Value::of_int(1).type_name(Language::python), ArgumentError);
    CHECK_THROWS_AS(Value::of_list({}).type_name(Language::cpp), UnsupportedTypeError);
    CHECK_THROWS_AS(Value::none().type_name(Language::java), UnsupportedTypeError);

    Value bools = Value::of_list({Value::of_bool(true)});
    CHECK_THROWS_AS(bools.type_name(Language::java), UnsupportedTypeError);
}

TEST_CASE("canonical forms distinguish kinds") {
    CHECK(Value::of_int(1).canonical() == "1");
    CHECK(Value::of_real(1.0).canonical() == "1.0");
    CHECK(Value::of_bool(true).canonical() == "true");
    CHECK(Value::of_string("1").canonical() == "\"1\"");
    CHECK(Value::none().canonical() == "null");
    Value xs = Value::of_list({Value::of_int(1), Value::of_int(2)});
    CHECK(xs.canonical() == "[1,2]");
    CHECK(Value::of_int(1).canonical() != Value::of_real(1.0).canonical());
}

TEST_CASE("JSON round trip") {
    std::vector<Value> samples = {
        Value::of_int(-12),
        Value::of_real(2.5),
        Value::of_bool(false),
        Value::of_string("hé\tllo"),
        Value::of_list({Value::of_real(1.5), Value::of_real(-0.25)}),
        Value::none(),
    };
    for (const Value& v : samples) {
        CHECK(Value::from_json(v.to_json()) == v);
    }

    SUBCASE("numeric lists promote mixed spellings to real") {
        auto v = Value::from_json(nlohmann::json::parse("[1, 2.5]"));
        CHECK(v.element_kind() == Value::Kind::real);
        CHECK(v.as_list()[0].as_real() == 1.0);
    }
    SUBCASE("objects are outside the domain") {
        CHECK_THROWS_AS(Value::from_json(nlohmann::json::parse("{\"a\":1}")), ParseError);
    }
    SUBCASE("mixed non-numeric lists are rejected") {
        CHECK_THROWS_AS(Value::from_json(nlohmann::json::parse("[1, \"a\"]")), ParseError);
    }
}

TEST_CASE("equality is kind aware") {
    CHECK(Value::of_int(1) == Value::of_int(1));
    CHECK(Value::of_int(1) != Value::of_real(1.0));
    CHECK(Value::of_list({Value::of_int(1)}) == Value::of_list({Value::of_int(1)}));
    CHECK(Value::of_list({Value::of_int(1)}) != Value::of_list({Value::of_int(2)}));
    CHECK(Value::none() == Value::none());
}
