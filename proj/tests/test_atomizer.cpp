#include <catch2/catch_amalgamated.hpp>

#include <memory>

#include "groundeval/atomizer.hpp"
#include "helpers.hpp"

using namespace groundeval;

namespace {

DecomposerSpec llm_decomposer(std::string scripted_output) {
    DecomposerSpec spec;
    spec.kind = DecomposerSpec::Kind::llm_prompted;
    spec.prompt_template =
        "Please break down the following text into independent facts:\n{text}";
    spec.backend = std::make_shared<CallbackBackend>(
        "fact-model",
        [out = std::move(scripted_output)](const GenRequest&) { return out; });
    return spec;
}

std::vector<std::string> fact_texts(const std::vector<AtomicFact>& facts) {
    std::vector<std::string> out;
    for (const auto& f : facts) out.push_back(f.text);
    return out;
}

}  // namespace

TEST_CASE("llm decomposer splits compound predicates") {
    auto spec = llm_decomposer("- Napoleon is French.\n- Napoleon is a general.");
    auto facts = decompose("Napoleon is a French general.", spec);
    CHECK(fact_texts(facts) ==
          std::vector<std::string>{"Napoleon is French.", "Napoleon is a general."});
}

TEST_CASE("llm decomposer handles long sentences with many facts") {
    auto spec = llm_decomposer(
        "1. The Indian Premier League is a men's Twenty20 cricket league.\n"
        "2. The Indian Premier League is annually held in India.\n"
        "3. The Indian Premier League is contested by ten city-based franchise "
        "teams.\n"
        "4. The Indian Premier League is also known as the TATA IPL.\n"
        "5. The Indian Premier League is known as the TATA IPL for sponsorship "
        "reasons.");
    auto facts = decompose(
        "The Indian Premier League (IPL) (also known as the TATA IPL for "
        "sponsorship reasons) is a men's Twenty20 (T20) cricket league that is "
        "annually held in India and contested by ten city-based franchise teams.",
        spec);
    REQUIRE(facts.size() == 5);
    CHECK(facts[0].text ==
          "The Indian Premier League is a men's Twenty20 cricket league.");
}

TEST_CASE("rule-based fallback splits per sentence") {
    DecomposerSpec spec;  // defaults to rule_based
    auto facts = decompose("A. B. C.", spec);
    REQUIRE(facts.size() == 3);
    CHECK(facts[0].text == "A.");
    CHECK(facts[2].text == "C.");
}

TEST_CASE("rule-based decompose is deterministic and pure") {
    DecomposerSpec spec;
    std::string input = "The falcon landed. The quartz cracked! Did it rain?";
    auto a = decompose(input, spec);
    auto b = decompose(input, spec);
    CHECK(a == b);
    REQUIRE(a.size() == 3);
    // terminal punctuation normalized to a period
    CHECK(a[1].text == "The quartz cracked.");
    CHECK(a[2].text == "Did it rain.");
}

TEST_CASE("rule-based coverage: any terminated text yields at least one fact") {
    DecomposerSpec spec;
    std::mt19937_64 rng(11);
    for (int i = 0; i < 50; ++i) {
        std::string input;
        int n_sent = 1 + static_cast<int>(rng() % 4);
        for (int s = 0; s < n_sent; ++s)
            input += testutil::random_sentence(rng, 1 + static_cast<int>(rng() % 6)) + " ";
        auto facts = decompose(input, spec);
        CHECK(facts.size() >= 1);
        for (const auto& f : facts) CHECK(is_single_declarative_sentence(f.text));
    }
}

TEST_CASE("decompose deduplicates repeated facts") {
    DecomposerSpec spec;
    auto facts = decompose("Same fact here. Same  fact HERE. Other fact there.", spec);
    REQUIRE(facts.size() == 2);
    CHECK(facts[0].text == "Same fact here.");
}

TEST_CASE("decompose rejects empty text") {
    DecomposerSpec spec;
    CHECK_THROWS_AS(decompose("  ", spec), std::invalid_argument);
}

TEST_CASE("llm decomposer propagates unparseable output with the raw text") {
    auto spec = llm_decomposer("\n\n  \n");
    REQUIRE_THROWS_MATCHES(decompose("Some text.", spec), ParseError,
                           Catch::Matchers::MessageMatches(
                               Catch::Matchers::ContainsSubstring("unparseable")));
}

TEST_CASE("parse_fact_list strips bullets and numbering") {
    SECTION("dash bullets") {
        auto facts = parse_fact_list("- Fact A.\n- Fact B.");
        CHECK(fact_texts(facts) == std::vector<std::string>{"Fact A.", "Fact B."});
    }
    SECTION("numbered with blank lines") {
        auto facts = parse_fact_list("1. X is Y.\n\n2. X is Z.");
        CHECK(fact_texts(facts) == std::vector<std::string>{"X is Y.", "X is Z."});
    }
    SECTION("empty input errors") {
        CHECK_THROWS_AS(parse_fact_list(""), ParseError);
    }
    SECTION("leading numbers that are content are kept") {
        auto facts = parse_fact_list("215 people attended.");
        CHECK(facts[0].text == "215 people attended.");
    }
}

TEST_CASE("parse_fact_list is idempotent on its own output") {
    std::mt19937_64 rng(23);
    for (int i = 0; i < 30; ++i) {
        std::string raw;
        int n = 1 + static_cast<int>(rng() % 5);
        for (int k = 0; k < n; ++k) {
            raw += (k % 2 ? "- " : std::to_string(k + 1) + ". ");
            raw += testutil::random_sentence(rng, 1 + static_cast<int>(rng() % 5));
            raw += "\n";
        }
        auto first = parse_fact_list(raw);
        std::string rendered;
        for (const auto& f : first) rendered += f.text + "\n";
        CHECK(parse_fact_list(rendered) == first);
    }
}
