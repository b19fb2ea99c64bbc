#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <random>

#include "mwpdiv/normalize.hpp"
#include "support/fixtures.hpp"
#include "support/helpers.hpp"

using namespace mwpdiv;
using namespace mwpdiv::testing;

using Tokens = std::vector<std::string>;

TEST_CASE("tokenize: PTB-style splits") {
    CHECK_EQ(tokenize("Tim bought 2 sandwiches."),
             Tokens{"Tim", "bought", "2", "sandwiches", "."});
    CHECK_EQ(tokenize("priced at $0.75."), Tokens{"priced", "at", "$", "0.75", "."});
    CHECK_EQ(tokenize(""), Tokens{});
    CHECK_EQ(tokenize("Tim's cat isn't here, she can't see it."),
             Tokens{"Tim", "'s", "cat", "is", "n't", "here", ",", "she", "ca", "n't",
                    "see", "it", "."});
    CHECK_EQ(tokenize("a cost of $1,275 and 3/4 of the rest"),
             Tokens{"a", "cost", "of", "$", "1,275", "and", "3/4", "of", "the", "rest"});
    CHECK_EQ(tokenize("100 km/hr (fast)"), Tokens{"100", "km/hr", "(", "fast", ")"});
    CHECK_EQ(tokenize("Mrs. Hilt waits."), Tokens{"Mrs.", "Hilt", "waits", "."});
    CHECK_EQ(tokenize("the students' books"), Tokens{"the", "students", "'", "books"});
    CHECK_EQ(tokenize("He cannot swim 25%."),
             Tokens{"He", "can", "not", "swim", "25", "%", "."});
    CHECK_EQ(tokenize("[NUM1] km/hr and [NAME2]"),
             Tokens{"[NUM1]", "km/hr", "and", "[NAME2]"});
}

TEST_CASE("pos_tag: lexicon, suffixes, fallbacks") {
    CHECK_EQ(pos_tag({"Mary", "has", "5", "books"}), Tokens{"NNP", "VBZ", "CD", "NNS"});
    CHECK_EQ(pos_tag({"0.75"}), Tokens{"CD"});
    CHECK_EQ(pos_tag({"xylofrange"}), Tokens{"NN"});
    CHECK_EQ(pos_tag({"John", "eats", "3", "apples", "."}),
             Tokens{"NNP", "VBZ", "CD", "NNS", "."});
    // capitalized non-initial unknown -> NNP; sentence-initial unknown -> suffix rules
    CHECK_EQ(pos_tag({"the", "Zorblat", "problem"}), Tokens{"DT", "NNP", "NN"});
    CHECK_EQ(pos_tag({"Zorblats", "are", "rare"}), Tokens{"NNS", "VBP", "NN"});
    // spelled-out numbers are CD via the lexicon
    CHECK_EQ(pos_tag({"Seven", "red", "apples"}), Tokens{"CD", "NN", "NNS"});
    CHECK_EQ(pos_tag({"[NUM1]", "[NAME1]"}), Tokens{"CD", "NNP"});
    CHECK_EQ(pos_tag({"$", "0.75", "."}), Tokens{"$", "CD", "."});
}

TEST_CASE("lemmatize: exceptions and POS-keyed suffix rules") {
    CHECK_EQ(lemmatize("books", "NNS"), "book");
    CHECK_EQ(lemmatize("bought", "VBD"), "buy");
    CHECK_EQ(lemmatize("2", "CD"), "2");
    CHECK_EQ(lemmatize("running", "VBG"), "run");
    CHECK_EQ(lemmatize("was", "VBD"), "be");
    CHECK_EQ(lemmatize("has", "VBZ"), "have");
    CHECK_EQ(lemmatize("eats", "VBZ"), "eat");
    CHECK_EQ(lemmatize("crosses", "VBZ"), "cross");
    CHECK_EQ(lemmatize("babies", "NNS"), "baby");
    CHECK_EQ(lemmatize("boxes", "NNS"), "box");
    CHECK_EQ(lemmatize("children", "NNS"), "child");
    CHECK_EQ(lemmatize("added", "VBD"), "add");
    CHECK_EQ(lemmatize("baked", "VBD"), "bake");
    CHECK_EQ(lemmatize("planned", "VBD"), "plan");
    CHECK_EQ(lemmatize("Mary", "NNP"), "mary");
    CHECK_EQ(lemmatize("loaves", "NNS"), "loaf");
    // meta symbols pass through untouched
    CHECK_EQ(lemmatize("[NUM3]", "CD"), "[NUM3]");
}

TEST_CASE("normalize_problem: quantity and name substitution") {
    SUBCASE("quantities become indexed [NUMk]") {
        auto p = normalize_problem(make_record(
            "p", "A train running at the speed of 100 km/hr crosses a pole in 18 seconds.",
            "What is the length of the train?"));
        auto has = [&](const std::string& t) {
            return std::find(p.norm_tokens.begin(), p.norm_tokens.end(), t) !=
                   p.norm_tokens.end();
        };
        CHECK(has("[NUM1]"));
        CHECK(has("[NUM2]"));
        CHECK_FALSE(has("100"));
        CHECK_FALSE(has("18"));
        CHECK_FALSE(has("the"));  // stop words removed
    }
    SUBCASE("same surface mention reuses the same symbol") {
        auto p = normalize_problem(make_record("p", "Mary has 5 books. Mary reads."));
        CHECK_EQ(std::count(p.norm_tokens.begin(), p.norm_tokens.end(), "[NAME1]"), 2);
        CHECK_EQ(std::count(p.norm_tokens.begin(), p.norm_tokens.end(), "[NUM1]"), 1);
        CHECK(std::find(p.norm_tokens.begin(), p.norm_tokens.end(), "[NAME2]") ==
              p.norm_tokens.end());
    }
    SUBCASE("repeated quantity value reuses its symbol") {
        auto p = normalize_problem(
            make_record("p", "Sarah played 8 games. During the 8 games she scored."));
        CHECK_EQ(std::count(p.norm_tokens.begin(), p.norm_tokens.end(), "[NUM1]"), 2);
    }
    SUBCASE("currency sign is absorbed into the quantity") {
        auto p = normalize_problem(make_record("p", "A sandwich is priced at $0.75."));
        CHECK(std::find(p.norm_tokens.begin(), p.norm_tokens.end(), "$") ==
              p.norm_tokens.end());
        CHECK(std::find(p.norm_tokens.begin(), p.norm_tokens.end(), "[NUM1]") !=
              p.norm_tokens.end());
        // pos_tokens keep the full pre-removal stream, original tags
        CHECK_EQ(p.pos_tokens, Tokens{"DT", "NN", "VBZ", "VBD", "IN", "$", "CD", "."});
    }
    SUBCASE("multi-token names collapse to one symbol") {
        auto p = normalize_problem(make_record("p", "Mrs. Hilt and Mary Sue Ellen agree."));
        CHECK_EQ(std::count(p.norm_tokens.begin(), p.norm_tokens.end(), "[NAME1]"), 1);
        CHECK_EQ(std::count(p.norm_tokens.begin(), p.norm_tokens.end(), "[NAME2]"), 1);
        CHECK(std::find(p.norm_tokens.begin(), p.norm_tokens.end(), "hilt") ==
              p.norm_tokens.end());
    }
    SUBCASE("problems differing only in names and values normalize identically") {
        auto a = normalize_problem(
            make_record("a", "Mary bought 5 apples and 7 oranges.", "How many fruits?"));
        auto b = normalize_problem(
            make_record("b", "John bought 12 apples and 3 oranges.", "How many fruits?"));
        CHECK_EQ(a.norm_tokens, b.norm_tokens);
    }
    SUBCASE("empty text is an error naming the id") {
        expect_throw_contains<InputError>(
            [] { normalize_problem(make_record("empty-one", "")); }, "empty-one");
    }
}

TEST_CASE("normalize_problem: meta symbol indices are dense and ordered") {
    auto p = normalize_problem(
        make_record("p", "Take 4 pears, 9 plums and 4 figs from Alice and Bob."));
    // distinct values 4, 9 -> [NUM1], [NUM2]; repeated 4 reuses [NUM1]
    Tokens nums;
    for (const auto& t : p.norm_tokens)
        if (t.rfind("[NUM", 0) == 0) nums.push_back(t);
    CHECK_EQ(nums, Tokens{"[NUM1]", "[NUM2]", "[NUM1]"});
    Tokens names;
    for (const auto& t : p.norm_tokens)
        if (t.rfind("[NAME", 0) == 0) names.push_back(t);
    CHECK_EQ(names, Tokens{"[NAME1]", "[NAME2]"});
}

TEST_CASE("normalize_problem is deterministic and idempotent") {
    const auto family = duplicate_family();
    for (const auto& r : family) {
        auto once = normalize_problem(r);
        auto again = normalize_problem(r);
        CHECK_EQ(once.norm_tokens, again.norm_tokens);
        CHECK_EQ(once.pos_tokens, again.pos_tokens);

        // re-normalizing the detokenized output leaves norm_tokens unchanged
        std::string joined;
        for (const auto& t : once.norm_tokens) {
            if (!joined.empty()) joined += ' ';
            joined += t;
        }
        auto twice = normalize_problem(make_record(r.id, joined));
        CHECK_EQ(twice.norm_tokens, once.norm_tokens);
    }
}

TEST_CASE("duplicate family collapses to one token sequence") {
    const auto family = duplicate_family();
    const auto reference = normalize_problem(family[0]);
    for (const auto& r : family) {
        CAPTURE(r.id);
        CHECK_EQ(normalize_problem(r).norm_tokens, reference.norm_tokens);
    }
}

TEST_CASE("consistent renaming/value-rewriting leaves norm_tokens fixed") {
    std::mt19937_64 rng(77);
    const std::vector<std::string> names = {"Mary", "John", "Sara", "Tim", "Wendy", "Carlos"};
    for (int round = 0; round < 30; ++round) {
        std::uniform_int_distribution<std::size_t> pick_name(0, names.size() - 1);
        std::uniform_int_distribution<int> pick_num(2, 9999);
        const std::string n1 = names[pick_name(rng)];
        std::string n2 = names[pick_name(rng)];
        const int v1 = pick_num(rng);
        int v2 = pick_num(rng);
        while (v2 == v1) v2 = pick_num(rng);  // keep the value map injective

        auto text = [](const std::string& who, int a, int b) {
            return who + " collected " + std::to_string(a) + " shells and gave " +
                   std::to_string(b) + " to a friend. How many shells does " + who +
                   " have now?";
        };
        auto a = normalize_problem(make_record("a", text(n1, v1, v2)));
        auto b = normalize_problem(make_record("b", text(n2, v2 + 10000, v1 + 10000)));
        CHECK_EQ(a.norm_tokens, b.norm_tokens);
    }
}

TEST_CASE("annotate zips surface, tag and lemma with non-empty fields") {
    auto anns = annotate("Mary bought 2 sandwiches.");
    REQUIRE_EQ(anns.size(), 5);
    CHECK_EQ(anns[1].surface, "bought");
    CHECK_EQ(anns[1].pos, "VBD");
    CHECK_EQ(anns[1].lemma, "buy");
    for (const auto& a : anns) {
        CHECK_FALSE(a.surface.empty());
        CHECK_FALSE(a.lemma.empty());
    }
}

TEST_CASE("stop words and gazetteer lookups") {
    CHECK(is_stopword("the"));
    CHECK(is_stopword("be"));
    CHECK(is_stopword("find"));
    CHECK_FALSE(is_stopword("train"));
    CHECK_FALSE(is_stopword("[NUM1]"));
    CHECK(in_name_gazetteer("Mary"));
    CHECK(in_name_gazetteer("Mrs."));
    CHECK_FALSE(in_name_gazetteer("Zorblat"));
    CHECK(is_meta_symbol("[NUM1]"));
    CHECK(is_meta_symbol("[NAME12]"));
    CHECK_FALSE(is_meta_symbol("[NUM]"));
    CHECK_FALSE(is_meta_symbol("[NUM1] "));
    CHECK(is_numeric_token("1,275"));
    CHECK(is_numeric_token("3/4"));
    CHECK(is_numeric_token("0.75"));
    CHECK_FALSE(is_numeric_token("a1"));
    CHECK_FALSE(is_numeric_token("12,34"));
}

TEST_CASE("sidecar entries replace the built-in annotation steps") {
    AnnotationSidecar sc;
    AnnotationSidecar::Entry e;
    e.tokens = {"Custom", "tokens", "9"};
    e.pos = {"NNP", "NNS", "CD"};
    e.lemmas = {"custom", "token", "9"};
    sc.add("p1", std::move(e));

    auto p = normalize_problem(make_record("p1", "This text is ignored."), &sc);
    CHECK_EQ(p.pos_tokens, Tokens{"NNP", "NNS", "CD"});
    CHECK_EQ(p.norm_tokens, Tokens{"custom", "token", "[NUM1]"});

    // ids without an entry fall back to the built-in pipeline
    auto q = normalize_problem(make_record("p2", "Mary has 5 books."), &sc);
    CHECK_EQ(q.norm_tokens, Tokens{"[NAME1]", "[NUM1]", "book", "."});

    AnnotationSidecar::Entry bad;
    bad.tokens = {"a"};
    bad.pos = {"NN", "NN"};
    bad.lemmas = {"a"};
    CHECK_THROWS_AS(sc.add("p3", std::move(bad)), InputError);
}

TEST_CASE("sidecar file loading") {
    auto path = std::filesystem::temp_directory_path() / "mwpdiv_sidecar.jsonl";
    {
        std::ofstream out(path, std::ios::trunc);
        out << R"({"id":"p1","tokens":["A","b"],"pos":["DT","NN"],"lemmas":["a","b"]})" << "\n";
    }
    AnnotationSidecar sc = AnnotationSidecar::load(path.string());
    CHECK_EQ(sc.size(), 1);
    REQUIRE(sc.find("p1") != nullptr);
    CHECK_EQ(sc.find("p1")->tokens.size(), 2);
    CHECK(sc.find("nope") == nullptr);
}
