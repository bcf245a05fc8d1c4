#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "groupaudit/ablation.hpp"
#include "groupaudit/errors.hpp"

using namespace groupaudit;

namespace {

const GroupLexicon& groups() {
    static GroupLexicon lex = GroupLexicon::load(
        std::string(GROUPAUDIT_DATA_DIR) + "/group_lexicon.txt");
    return lex;
}

const SentimentLexicon& sentiment() {
    static SentimentLexicon lex = SentimentLexicon::load(GROUPAUDIT_DATA_DIR);
    return lex;
}

RawDocument doc(std::string id, std::string body) {
    RawDocument d;
    d.id = std::move(id);
    d.text = std::move(body);
    d.source = Source::corpus;
    return d;
}

// mixed corpus with a known composition of targeted sentences
std::vector<LabeledTrainingSentence> fixture(std::size_t per_cell,
                                             unsigned seed) {
    const std::vector<std::string> in_pos = {
        "We love this wonderful team.", "We are so happy together.",
        "Our friends are truly great."};
    const std::vector<std::string> out_neg = {
        "They ruined everything again.", "They are awful and cruel.",
        "Their plan hurt everyone badly."};
    const std::vector<std::string> other = {
        "It rained all day long.", "We are waiting for the results.",
        "They are walking to the station.", "The market closed early."};
    std::mt19937 rng(seed);
    std::vector<RawDocument> docs;
    std::size_t counts[3] = {per_cell, per_cell, 2 * per_cell};
    std::size_t id = 0;
    while (counts[0] + counts[1] + counts[2] > 0) {
        std::size_t pick = rng() % 3;
        while (counts[pick] == 0) pick = (pick + 1) % 3;
        --counts[pick];
        const auto& pool = pick == 0 ? in_pos : pick == 1 ? out_neg : other;
        docs.push_back(doc("d" + std::to_string(id++), pool[rng() % pool.size()]));
    }
    return label_training_corpus(docs, groups(), sentiment());
}

}  // namespace

TEST_CASE("labeling assigns group and sentiment per the rules") {
    auto sentences = label_training_corpus(
        {doc("a", "We love our community! They ruined everything. It rained.")},
        groups(), sentiment());
    REQUIRE(sentences.size() == 3);
    CHECK(sentences[0].group == Group::Ingroup);
    CHECK(sentences[0].sentiment_label == SentimentLabel::Positive);
    CHECK(sentences[1].group == Group::Outgroup);
    CHECK(sentences[1].sentiment_label == SentimentLabel::Negative);
    CHECK_FALSE(sentences[2].group.has_value());
    CHECK_FALSE(sentences[2].sentiment_label.has_value());
}

TEST_CASE("keep-everything spec is the identity") {
    auto sentences = fixture(50, 1);
    auto original = sentences;
    AblationSpec spec;  // defaults keep 1.0 / 1.0
    auto stats = apply_ablation(sentences, spec);
    CHECK(stats.ingroup_positive_kept == stats.ingroup_positive);
    CHECK(stats.outgroup_negative_kept == stats.outgroup_negative);
    for (std::size_t i = 0; i < sentences.size(); ++i) {
        CHECK(sentences[i].keep);
        CHECK(sentences[i].text == original[i].text);
    }
}

TEST_CASE("keep-nothing spec removes every targeted sentence") {
    auto sentences = fixture(50, 2);
    AblationSpec spec;
    spec.keep_ingroup_positive = 0.0;
    spec.keep_outgroup_negative = 0.0;
    auto stats = apply_ablation(sentences, spec);
    CHECK(stats.ingroup_positive_kept == 0);
    CHECK(stats.outgroup_negative_kept == 0);

    // relabeling the survivors finds no targeted sentences at all
    for (const auto& s : sentences) {
        if (!s.keep) continue;
        const bool in_pos = s.group == Group::Ingroup &&
                            s.sentiment_label == SentimentLabel::Positive;
        const bool out_neg = s.group == Group::Outgroup &&
                             s.sentiment_label == SentimentLabel::Negative;
        CHECK_FALSE(in_pos);
        CHECK_FALSE(out_neg);
    }
}

TEST_CASE("half-and-half realized fractions on a large fixture") {
    auto sentences = fixture(2500, 3);  // 10000 sentences total
    AblationSpec spec;
    spec.keep_ingroup_positive = 0.5;
    spec.keep_outgroup_negative = 0.5;
    spec.seed = 99;
    auto stats = apply_ablation(sentences, spec);
    CHECK(stats.total_sentences == 10000);
    CHECK(std::abs(stats.realized_ingroup_positive() - 0.5) <= 0.02);
    CHECK(std::abs(stats.realized_outgroup_negative() - 0.5) <= 0.02);
    // untargeted sentences are untouched
    CHECK(stats.other_kept == stats.total_sentences - stats.ingroup_positive -
                                  stats.outgroup_negative);
}

TEST_CASE("kept counts stay at or below the ceiling") {
    for (double frac : {0.1, 0.33, 0.5, 0.77}) {
        auto sentences = fixture(200, 4);
        AblationSpec spec;
        spec.keep_ingroup_positive = frac;
        spec.keep_outgroup_negative = frac;
        spec.seed = 7;
        auto stats = apply_ablation(sentences, spec);
        CHECK(stats.ingroup_positive_kept <=
              static_cast<std::size_t>(std::ceil(frac * stats.ingroup_positive)));
        CHECK(stats.outgroup_negative_kept <=
              static_cast<std::size_t>(std::ceil(frac * stats.outgroup_negative)));
    }
}

TEST_CASE("pass-through preserves order of untargeted sentences") {
    auto sentences = fixture(100, 5);
    AblationSpec spec;
    spec.keep_ingroup_positive = 0.3;
    spec.keep_outgroup_negative = 0.3;
    auto original = sentences;
    apply_ablation(sentences, spec);

    std::vector<std::string> untargeted_before, untargeted_after;
    for (const auto& s : original)
        if (!s.group) untargeted_before.push_back(s.text);
    for (const auto& s : sentences)
        if (!s.group && s.keep) untargeted_after.push_back(s.text);
    // every ungrouped sentence survives in its original position
    CHECK(untargeted_before == untargeted_after);
}

TEST_CASE("same seed reproduces the exact keep pattern") {
    for (int round = 0; round < 2; ++round) {
        auto a = fixture(300, 6);
        auto b = a;
        AblationSpec spec;
        spec.keep_ingroup_positive = 0.4;
        spec.keep_outgroup_negative = 0.6;
        spec.seed = 1234;
        apply_ablation(a, spec);
        apply_ablation(b, spec);
        for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].keep == b[i].keep);

        spec.seed = 1235;
        auto c = fixture(300, 6);
        apply_ablation(c, spec);
        bool any_difference = false;
        for (std::size_t i = 0; i < a.size(); ++i)
            if (a[i].keep != c[i].keep) any_difference = true;
        CHECK(any_difference);
    }
}

TEST_CASE("document mode removes whole documents") {
    std::vector<RawDocument> docs = {
        doc("d1", "We love this wonderful team. The game starts at noon."),
        doc("d2", "It rained. Nothing else happened."),
        doc("d3", "They are awful and cruel. Their dog is nice.")};
    auto sentences = label_training_corpus(docs, groups(), sentiment());
    AblationSpec spec;
    spec.keep_ingroup_positive = 0.0;
    spec.keep_outgroup_negative = 0.0;
    spec.remove_unit = RemoveUnit::Document;
    apply_ablation(sentences, spec);
    for (const auto& s : sentences) {
        if (s.doc_id == "d2")
            CHECK(s.keep);
        else
            CHECK_FALSE(s.keep);
    }
}

TEST_CASE("rejoin emits one line per surviving document") {
    auto sentences = label_training_corpus(
        {doc("a", "We love our great team! It rained."),
         doc("b", "Nothing special here.")},
        groups(), sentiment());
    AblationSpec spec;
    spec.keep_ingroup_positive = 0.0;
    apply_ablation(sentences, spec);
    auto lines = rejoin_documents(sentences);
    REQUIRE(lines.size() == 2);
    CHECK(lines[0] == "It rained.");
    CHECK(lines[1] == "Nothing special here.");
}

TEST_CASE("out-of-range fractions are rejected") {
    auto sentences = fixture(10, 8);
    AblationSpec spec;
    spec.keep_ingroup_positive = 1.5;
    CHECK_THROWS_AS(apply_ablation(sentences, spec), ConfigError);
}
