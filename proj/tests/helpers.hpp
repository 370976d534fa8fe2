#pragma once

// Shared test fixtures and small generators.

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "groundeval/core.hpp"

namespace testutil {

using namespace groundeval;

inline Instance minimal_instance(const std::string& id = "x1") {
    Instance inst;
    inst.id = id;
    inst.version = Version::original;
    inst.question = "What is the claimed number?";
    inst.answers = {"215"};
    inst.contexts = {{"Doc", "", "The claimed number was 215 according to reports.",
                      true}};
    inst.gold_facts = {{"The claimed number was 215.", size_t{0}}};
    inst.factors = {Popularity::low, Multiplicity::single, AnswerFormat::definite};
    return inst;
}

// The Operation Sunset Beach item: one gold document, two gold facts, a
// definite answer with a single alias.
inline Instance sunset_original() {
    Instance inst;
    inst.id = "sunset-beach";
    inst.version = Version::original;
    inst.question =
        "Provide the claimed number of Viet Cong killed during Operation Sunset "
        "Beach.";
    inst.answers = {"215"};
    inst.contexts = {
        {"Operation Sunset Beach", "",
         "On 20 September the 1st Battalion, 5th Infantry Regiment (Mechanized) "
         "conducted a sweep of the Boi Loi Woods, meeting sporadic resistance and "
         "destroying bunkers and supplies.\n== Aftermath ==\nOperation Sunset Beach "
         "officially concluded on 11 October, with US reports claiming that Viet "
         "Cong losses were 80 killed (body count) and a further 135 estimated "
         "killed, U.S. losses were 29 killed.\n== References ==\nThis article "
         "incorporates public domain material from websites or documents of the "
         "United States Army Center of Military History.",
         true}};
    inst.gold_facts = {
        {"US reports claim Viet Cong losses were 80 killed (body count).", size_t{0}},
        {"US reports estimate Viet Cong losses were 135 killed.", size_t{0}}};
    inst.factors = {Popularity::low, Multiplicity::single, AnswerFormat::definite};
    return inst;
}

// The revised pair: key numbers flipped (80 -> 180, 135 -> 235, 215 -> 415).
inline Instance sunset_conflict() {
    Instance inst = sunset_original();
    inst.version = Version::conflict;
    inst.answers = {"415"};
    auto& body = inst.contexts[0].body;
    auto patch = [&body](const std::string& from, const std::string& to) {
        auto pos = body.find(from);
        body.replace(pos, from.size(), to);
    };
    patch("losses were 80 killed", "losses were 180 killed");
    patch("a further 135 estimated", "a further 235 estimated");
    inst.gold_facts = {
        {"US reports claim Viet Cong losses were 180 killed (body count).", size_t{0}},
        {"US reports estimate Viet Cong losses were 235 killed.", size_t{0}}};
    return inst;
}

// Deterministic word soup for randomized instances.
inline std::string random_word(std::mt19937_64& rng) {
    static const char* words[] = {
        "falcon", "quartz", "meadow", "copper", "harbor", "signal", "timber",
        "velvet", "canyon", "orchid", "lantern", "breeze", "cobalt", "summit",
        "ember",  "willow", "granite", "monsoon", "pepper", "saffron",
    };
    return words[rng() % (sizeof(words) / sizeof(words[0]))];
}

inline std::string random_sentence(std::mt19937_64& rng, int n_words) {
    std::string s;
    for (int i = 0; i < n_words; ++i) {
        if (i) s += " ";
        s += random_word(rng);
    }
    s += ".";
    s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
    return s;
}

struct TempDir {
    std::filesystem::path path;

    explicit TempDir(const std::string& tag) {
        path = std::filesystem::temp_directory_path() /
               ("groundeval-test-" + tag + "-" + std::to_string(std::random_device{}()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
};

}  // namespace testutil
