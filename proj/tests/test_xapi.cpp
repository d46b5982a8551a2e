#include <random>

#include "doctest.h"
#include "story/xapi.hpp"

using namespace story;
using namespace story::xapi;

namespace {
const Statement& stmt(const Program& p, std::size_t i) {
    REQUIRE(i < p.size());
    REQUIRE(std::holds_alternative<Statement>(p[i]));
    return std::get<Statement>(p[i]);
}
}  // namespace

TEST_CASE("quote statement with scene designator and pronoun I") {
    auto p = parse_program("\"LRRH\" / says in scene \"GrandmasHouse\" //\n"
                           "  I / is-a / afraid.\n");
    REQUIRE(p.size() == 1);
    const Statement& s = stmt(p, 0);
    CHECK(s.main.subject.form == PartRef::Form::Proper);
    CHECK(s.main.subject.name == "LRRH");
    CHECK(s.main.verb.words == std::vector<std::string>{"says"});
    REQUIRE(s.main.verb.scene_label.has_value());
    CHECK(*s.main.verb.scene_label == "GrandmasHouse");
    CHECK_FALSE(s.main.object.has_value());
    REQUIRE(s.quoted.has_value());
    CHECK(s.quoted->subject.form == PartRef::Form::PronounI);
    CHECK(s.quoted->verb.words == std::vector<std::string>{"is-a"});
    REQUIRE(s.quoted->object.has_value());
    CHECK(s.quoted->object->words == std::vector<std::string>{"afraid"});
    CHECK(s.term == '.');
}

TEST_CASE("plain SV statement") {
    auto p = parse_program("The wolf / sneezes.");
    const Statement& s = stmt(p, 0);
    CHECK(s.main.subject.form == PartRef::Form::Definite);
    CHECK(s.main.subject.words == std::vector<std::string>{"wolf"});
    CHECK_FALSE(s.main.object.has_value());
    CHECK_FALSE(s.quoted.has_value());
}

TEST_CASE("empty program") {
    CHECK(parse_program("").empty());
    CHECK(parse_program("  # just a comment\n").empty());
}

TEST_CASE("definite and indefinite objects") {
    auto p = parse_program("The FocusI2 / act / the InstanceE1.\n"
                           "The FocusI2 / act / the InstanceE2.\n"
                           "The FocusI2 / act / an InstanceNew.\n");
    REQUIRE(p.size() == 3);
    CHECK(stmt(p, 0).main.object->form == PartRef::Form::Definite);
    CHECK(stmt(p, 2).main.object->form == PartRef::Form::Indefinite);
    CHECK(stmt(p, 2).main.object->words == std::vector<std::string>{"InstanceNew"});
}

TEST_CASE("conversation pair: chains, wh marker, question terminator") {
    auto p = parse_program(
        "The wolf / says in scene \"Conversation\"//\n"
        "  eyes -- of -- I / sees good / the girl.\n"
        "The girl / asks in scene \"Conversation\"//\n"
        "   mouth -- of -- \"Grandma\" / wh is-a / big?\n");
    REQUIRE(p.size() == 2);

    const Statement& first = stmt(p, 0);
    REQUIRE(first.quoted.has_value());
    const PartRef& chain = first.quoted->subject;
    REQUIRE(chain.form == PartRef::Form::Chain);
    CHECK(chain.chain_head->words == std::vector<std::string>{"eyes"});
    CHECK(chain.chain_relation == "of");
    CHECK(chain.chain_tail->form == PartRef::Form::PronounI);
    CHECK(first.quoted->verb.words == std::vector<std::string>{"sees", "good"});
    CHECK(first.term == '.');

    const Statement& second = stmt(p, 1);
    REQUIRE(second.quoted.has_value());
    CHECK(second.quoted->subject.chain_tail->form == PartRef::Form::Proper);
    CHECK(second.quoted->subject.chain_tail->name == "Grandma");
    CHECK(second.quoted->verb.wh);
    CHECK(second.term == '?');
}

TEST_CASE("text literal object") {
    auto p = parse_program("\"LRRH\" / utters / text \"Bless you\".");
    const Statement& s = stmt(p, 0);
    REQUIRE(s.main.object.has_value());
    CHECK(s.main.object->form == PartRef::Form::Text);
    CHECK(s.main.object->text == "Bless you");
}

TEST_CASE("SVO and multiword verb phrases") {
    auto p = parse_program("The wolf / eats / the girl.\n"
                           "The girl / gives / the basket.\n"
                           "The wolf / thus takes / the basket.\n");
    REQUIRE(p.size() == 3);
    CHECK(stmt(p, 0).main.object->words == std::vector<std::string>{"girl"});
    CHECK(stmt(p, 2).main.verb.words == std::vector<std::string>{"thus", "takes"});
}

TEST_CASE("scene keyword is optional in the designator") {
    auto p = parse_program("The wolf / says in \"conversation\" // I / sneezes.");
    const Statement& s = stmt(p, 0);
    REQUIRE(s.main.verb.scene_label.has_value());
    CHECK(*s.main.verb.scene_label == "conversation");
}

TEST_CASE("directives") {
    auto p = parse_program("$new-scene \"Forest\"\n"
                           "$link-scenes \"A\" succession \"B\"\n"
                           "$summary-begin\n"
                           "$non-identical \"Achilles\" \"Hector\"\n");
    REQUIRE(p.size() == 4);
    const auto& d0 = std::get<Directive>(p[0]);
    CHECK(d0.name == "new-scene");
    REQUIRE(d0.args.size() == 1);
    CHECK(d0.args[0].value == "Forest");
    CHECK(d0.args[0].quoted);
    const auto& d1 = std::get<Directive>(p[1]);
    CHECK(d1.args.size() == 3);
    CHECK_FALSE(d1.args[1].quoted);
    CHECK(std::get<Directive>(p[2]).args.empty());
}

TEST_CASE("syntax errors carry positions") {
    try {
        parse_program("The wolf / \n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line >= 1);
    }
    CHECK_THROWS_AS(parse_program("The wolf eats."), ParseError);
    CHECK_THROWS_AS(parse_program("The wolf / says \"unterminated"), ParseError);
    CHECK_THROWS_AS(parse_program("The wolf / says //"), ParseError);
}

TEST_CASE("wh and '?' imply each other") {
    CHECK_THROWS_AS(parse_program("The mouth / wh is-a / big."), ParseError);
    CHECK_THROWS_AS(parse_program("The mouth / is-a / big?"), ParseError);
    CHECK_NOTHROW(parse_program("The mouth / wh is-a / big?"));
}

TEST_CASE("round-trip: unparse then reparse yields an equal AST") {
    const char* sources[] = {
        "\"LRRH\" / says in scene \"GrandmasHouse\" // I / is-a / afraid.",
        "The wolf / sneezes.",
        "the FocusI2 / act / an InstanceNew.",
        "the wolf / says in scene \"Conversation\" // the eyes -- of -- I / sees good / the girl.",
        "\"LRRH\" / utters / text \"Bless you\".",
        "the girl / gives / the basket.",
        "$link-scenes \"A\" succession \"B\"",
        "the mouth -- of -- \"Grandma\" / wh is-a / big?",
    };
    for (const char* src : sources) {
        auto p1 = parse_program(src);
        REQUIRE(p1.size() == 1);
        std::string printed = unparse(p1[0]);
        auto p2 = parse_program(printed);
        REQUIRE(p2.size() == 1);
        CHECK_MESSAGE(equal(p1[0], p2[0]), "round trip failed for: ", printed);
        CHECK(unparse(p2[0]) == printed);
    }
}

TEST_CASE("round-trip holds on generated statements") {
    std::mt19937 rng(3);
    const std::vector<std::string> nouns = {"wolf", "girl", "basket", "hunter"};
    const std::vector<std::string> verbs = {"eats", "sees", "takes", "sneezes"};
    for (int i = 0; i < 300; ++i) {
        Statement st;
        auto part = [&](PartRef& p) {
            switch (rng() % 4) {
                case 0:
                    p.form = PartRef::Form::Definite;
                    p.words = {nouns[rng() % nouns.size()]};
                    break;
                case 1:
                    p.form = PartRef::Form::Indefinite;
                    p.words = {nouns[rng() % nouns.size()], nouns[rng() % nouns.size()]};
                    break;
                case 2:
                    p.form = PartRef::Form::Proper;
                    p.name = "Name" + std::to_string(rng() % 5);
                    break;
                default: p.form = PartRef::Form::PronounI; break;
            }
        };
        part(st.main.subject);
        st.main.verb.words = {verbs[rng() % verbs.size()]};
        if (rng() % 2) {
            st.main.object.emplace();
            part(*st.main.object);
        }
        if (rng() % 3 == 0) st.main.verb.scene_label = "Scene" + std::to_string(rng() % 3);
        st.term = '.';
        Item item = st;
        auto reparsed = parse_program(unparse(item));
        REQUIRE(reparsed.size() == 1);
        CHECK(equal(item, reparsed[0]));
    }
}
