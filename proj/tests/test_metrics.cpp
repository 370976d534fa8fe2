#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <memory>

#include "groundeval/metrics.hpp"
#include "helpers.hpp"

using namespace groundeval;

namespace {

// Independent recomputation used by the equivalence tests: nested loops
// over every fact x passage pair with its own token matching, no calls
// into judge()/grounding_* internals.
bool brute_fact_in_passage(const std::string& fact, const std::string& passage) {
    const auto& stop = text::default_stopwords();
    std::vector<std::string> fact_words;
    {
        std::string cur;
        for (unsigned char c : fact + " ") {
            if (std::isalnum(c)) {
                cur.push_back(static_cast<char>(std::tolower(c)));
            } else if (!cur.empty()) {
                if (!stop.count(cur)) fact_words.push_back(cur);
                cur.clear();
            }
        }
    }
    std::vector<std::string> passage_stems;
    {
        std::string cur;
        for (unsigned char c : passage + " ") {
            if (std::isalnum(c)) {
                cur.push_back(static_cast<char>(std::tolower(c)));
            } else if (!cur.empty()) {
                passage_stems.push_back(text::stem(cur));
                cur.clear();
            }
        }
    }
    for (const auto& w : fact_words) {
        bool found = false;
        for (const auto& p : passage_stems)
            if (text::stem(w) == p) found = true;
        if (!found) return false;
    }
    return true;
}

double brute_precision(const std::vector<AtomicFact>& facts,
                       const std::vector<ContextDocument>& docs, bool gold_only) {
    if (facts.empty()) return 0.0;
    size_t present = 0;
    for (const auto& f : facts) {
        bool anywhere = false;
        for (const auto& d : docs) {
            if (gold_only && !d.is_gold) continue;
            if (brute_fact_in_passage(f.text, d.body)) anywhere = true;
        }
        if (anywhere) ++present;
    }
    return static_cast<double>(present) / static_cast<double>(facts.size());
}

double brute_recall(const std::vector<AtomicFact>& gold, const std::string& response) {
    if (text::trim(response).empty()) return 0.0;
    size_t present = 0;
    for (const auto& f : gold)
        if (brute_fact_in_passage(f.text, response)) ++present;
    return static_cast<double>(present) / static_cast<double>(gold.size());
}

struct RandomCase {
    Instance inst;
    std::vector<AtomicFact> response_facts;
    std::string response_text;
};

RandomCase make_random_case(std::mt19937_64& rng) {
    RandomCase c;
    c.inst.id = "r";
    c.inst.question = "Q?";
    size_t n_docs = 1 + rng() % 4;
    for (size_t d = 0; d < n_docs; ++d) {
        std::string body;
        int n_sent = 1 + static_cast<int>(rng() % 3);
        for (int s = 0; s < n_sent; ++s)
            body += testutil::random_sentence(rng, 2 + static_cast<int>(rng() % 6)) + " ";
        c.inst.contexts.push_back(
            {"D" + std::to_string(d), "", body, d == 0 || rng() % 2 == 0});
    }
    size_t n_gold = 1 + rng() % 8;
    for (size_t g = 0; g < n_gold; ++g) {
        // some gold facts quote a document sentence, some invent words
        if (rng() % 2) {
            const auto& doc = c.inst.contexts[rng() % n_docs];
            auto sentences = text::split_sentences(doc.body);
            c.inst.gold_facts.push_back({sentences[rng() % sentences.size()],
                                         std::nullopt});
        } else {
            c.inst.gold_facts.push_back(
                {testutil::random_sentence(rng, 2 + static_cast<int>(rng() % 4)),
                 std::nullopt});
        }
    }
    size_t n_resp = rng() % 9;
    for (size_t f = 0; f < n_resp; ++f) {
        if (rng() % 2) {
            const auto& doc = c.inst.contexts[rng() % n_docs];
            auto sentences = text::split_sentences(doc.body);
            c.response_facts.push_back({sentences[rng() % sentences.size()],
                                        std::nullopt});
        } else {
            c.response_facts.push_back(
                {testutil::random_sentence(rng, 2 + static_cast<int>(rng() % 4)),
                 std::nullopt});
        }
    }
    int n_resp_sent = static_cast<int>(rng() % 4);
    for (int s = 0; s < n_resp_sent; ++s) {
        if (rng() % 2 && !c.inst.gold_facts.empty()) {
            c.response_text += c.inst.gold_facts[rng() % c.inst.gold_facts.size()].text;
            c.response_text += " ";
        } else {
            c.response_text +=
                testutil::random_sentence(rng, 2 + static_cast<int>(rng() % 5)) + " ";
        }
    }
    return c;
}

}  // namespace

TEST_CASE("precision basics under the lexical oracle") {
    auto oracle = OracleSpec::lexical();
    std::vector<ContextDocument> docs = {
        {"Gold", "", "The copper lantern glows at night. The harbor is deep.", true},
        {"Dist", "", "Granite summits loom over the meadow.", false}};

    SECTION("verbatim facts from the gold document") {
        std::vector<AtomicFact> facts = {{"The copper lantern glows at night.", {}},
                                         {"The harbor is deep.", {}}};
        CHECK(grounding_precision(facts, docs, oracle) == 1.0);
    }
    SECTION("one grounded, one found nowhere") {
        std::vector<AtomicFact> facts = {{"The harbor is deep.", {}},
                                         {"The moon is made of cheese.", {}}};
        CHECK(grounding_precision(facts, docs, oracle) == 0.5);
    }
    SECTION("scope semantics: distractor-only fact") {
        std::vector<AtomicFact> facts = {{"Granite summits loom over the meadow.", {}}};
        CHECK(grounding_precision(facts, docs, oracle, PrecisionScope::full_input) ==
              1.0);
        CHECK(grounding_precision(facts, docs, oracle, PrecisionScope::gold_only) ==
              0.0);
    }
    SECTION("empty response facts score 0, not a vacuous 1") {
        CHECK(grounding_precision({}, docs, oracle) == 0.0);
    }
    SECTION("empty contexts are a precondition violation") {
        CHECK_THROWS_AS(grounding_precision({}, {}, oracle), std::invalid_argument);
    }
    SECTION("gold_only with no gold documents errors") {
        std::vector<ContextDocument> no_gold = {{"D", "", "Body here.", false}};
        CHECK_THROWS_AS(
            grounding_precision({}, no_gold, oracle, PrecisionScope::gold_only), Error);
    }
}

TEST_CASE("recall basics") {
    auto oracle = OracleSpec::lexical();
    auto inst = testutil::sunset_original();

    SECTION("response containing both gold facts verbatim") {
        std::string response =
            "US reports claim Viet Cong losses were 80 killed (body count). "
            "US reports estimate Viet Cong losses were 135 killed.";
        CHECK(grounding_recall(inst.gold_facts, response, oracle) == 1.0);
    }
    SECTION("empty response scores 0 without erroring") {
        CHECK(grounding_recall(inst.gold_facts, "", oracle) == 0.0);
    }
    SECTION("one of two gold facts") {
        std::string response =
            "US reports claim Viet Cong losses were 80 killed (body count).";
        CHECK(grounding_recall(inst.gold_facts, response, oracle) == 0.5);
    }
}

TEST_CASE("f1 algebra") {
    CHECK(grounding_f1(1.0, 1.0) == 1.0);
    CHECK(grounding_f1(0.5, 1.0) == Catch::Approx(2.0 / 3.0).epsilon(1e-9));
    CHECK(grounding_f1(0.0, 0.0) == 0.0);

    std::mt19937_64 rng(5);
    for (int i = 0; i < 1000; ++i) {
        double p = static_cast<double>(rng() % 10001) / 10000.0;
        double r = static_cast<double>(rng() % 10001) / 10000.0;
        double f = grounding_f1(p, r);
        if (p + r > 0) CHECK(std::abs(f - 2 * p * r / (p + r)) < 1e-12);
        CHECK(f >= std::min(p, r) - 1e-12);
        CHECK(f <= std::max(p, r) + 1e-12);
    }
}

TEST_CASE("brute-force equivalence under the lexical oracle") {
    auto oracle = OracleSpec::lexical();
    std::mt19937_64 rng(99);
    for (int i = 0; i < 200; ++i) {
        auto c = make_random_case(rng);
        for (bool gold_only : {false, true}) {
            auto scope = gold_only ? PrecisionScope::gold_only
                                   : PrecisionScope::full_input;
            double expect = brute_precision(c.response_facts, c.inst.contexts, gold_only);
            CHECK(grounding_precision(c.response_facts, c.inst.contexts, oracle,
                                      scope) == expect);
        }
        CHECK(grounding_recall(c.inst.gold_facts, c.response_text, oracle) ==
              brute_recall(c.inst.gold_facts, c.response_text));
    }
}

TEST_CASE("precision monotonicity and scope dominance") {
    auto oracle = OracleSpec::lexical();
    std::mt19937_64 rng(123);
    for (int i = 0; i < 50; ++i) {
        auto c = make_random_case(rng);

        double full = grounding_precision(c.response_facts, c.inst.contexts, oracle,
                                          PrecisionScope::full_input);
        double gold = grounding_precision(c.response_facts, c.inst.contexts, oracle,
                                          PrecisionScope::gold_only);
        CHECK(full >= gold);

        // appending a fact judged present never decreases the numerator
        auto with_present = c.response_facts;
        auto sentences = text::split_sentences(c.inst.contexts[0].body);
        with_present.push_back({sentences[0], std::nullopt});
        double before_num = full * static_cast<double>(c.response_facts.size());
        double after_num =
            grounding_precision(with_present, c.inst.contexts, oracle) *
            static_cast<double>(with_present.size());
        CHECK(after_num >= before_num - 1e-9);

        // appending an already-covered gold fact never decreases recall
        if (!text::trim(c.response_text).empty()) {
            auto gold_facts = c.inst.gold_facts;
            auto resp_sents = text::split_sentences(c.response_text);
            gold_facts.push_back({resp_sents[0], std::nullopt});
            double r0 = grounding_recall(c.inst.gold_facts, c.response_text, oracle);
            double r1 = grounding_recall(gold_facts, c.response_text, oracle);
            double n0 = static_cast<double>(c.inst.gold_facts.size());
            double n1 = static_cast<double>(gold_facts.size());
            CHECK(r1 * n1 >= r0 * n0 - 1e-9);
        }
    }
}

TEST_CASE("answer accuracy") {
    SECTION("alias contained in response") {
        CHECK(answer_accuracy("The reports claimed a total of 215 Viet Cong killed.",
                              {"215"}) == 1);
    }
    SECTION("answer absent") {
        CHECK(answer_accuracy("The answer is unknown.", {"215"}) == 0);
    }
    SECTION("any alias counts") {
        CHECK(answer_accuracy("It had a Chevy-sourced V8 engine.",
                              {"Chevrolet", "Chevy"}) == 1);
    }
    SECTION("case and whitespace insensitive") {
        CHECK(answer_accuracy("  THE ANSWER IS   chevrolet  ", {"Chevrolet"}) == 1);
        std::mt19937_64 rng(7);
        for (int i = 0; i < 20; ++i) {
            std::string resp = "prefix " + testutil::random_word(rng) + " answer42 tail";
            std::string shouted;
            for (char ch : resp)
                shouted.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(ch))));
            CHECK(answer_accuracy(resp, {"answer42"}) ==
                  answer_accuracy("   " + shouted + "\n", {"answer42"}));
        }
    }
    SECTION("empty answer list is a caller error") {
        CHECK_THROWS_AS(answer_accuracy("text", {}), std::invalid_argument);
    }
}

TEST_CASE("fluency judging") {
    SECTION("form-filling output") {
        CHECK(parse_fluency_output("Fluency (1-5): 5") == 5);
    }
    SECTION("bare integer") {
        CHECK(parse_fluency_output("4") == 4);
    }
    SECTION("unparseable output errors") {
        CHECK_THROWS_AS(parse_fluency_output("pretty good"), ParseError);
    }
    SECTION("out-of-range integer errors") {
        CHECK_THROWS_AS(parse_fluency_output("7"), ParseError);
        CHECK_THROWS_AS(parse_fluency_output("Fluency (1-5): 0"), ParseError);
    }
    SECTION("end to end against a judge backend") {
        CallbackBackend judge_backend("g-eval", [](const GenRequest& req) -> std::string {
            REQUIRE(req.prompt.find("Fluency (1-5)") != std::string::npos);
            REQUIRE(req.prompt.find("A fluent response.") != std::string::npos);
            return "Fluency (1-5): 4";
        });
        CHECK(fluency_score("A fluent response.", judge_backend) == 4);
    }
    SECTION("empty response is a precondition violation") {
        CallbackBackend judge_backend("g-eval", [](const GenRequest&) { return "5"; });
        CHECK_THROWS_AS(fluency_score("  ", judge_backend), std::invalid_argument);
    }
}
