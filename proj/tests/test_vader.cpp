#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <random>

#include <nlohmann/json.hpp>

#include "groupaudit/vader.hpp"

using namespace groupaudit;

namespace {

const SentimentLexicon& lexicon() {
    static SentimentLexicon lex = SentimentLexicon::load(GROUPAUDIT_DATA_DIR);
    return lex;
}

double compound(const std::string& s) {
    return vader_compound(s, lexicon()).compound;
}

}  // namespace

TEST_CASE("published compound scores reproduce") {
    CHECK(compound("They are in the business of collecting a fee for doing "
                   "research for you.") == doctest::Approx(0.0).epsilon(1e-4));
    CHECK(compound("We are living through a time in which society at all levels "
                   "is searching for new ways to think about and live out "
                   "relationships.") == doctest::Approx(0.0).epsilon(1e-4));
    CHECK(compound("They are the true brothers, the true cousins, the true "
                   "sisters, the true daughters of all men, the true friends of "
                   "all people.") == doctest::Approx(0.9442).epsilon(1e-4));
    CHECK(compound("We are also sorry for all the inconvenience this has caused "
                   "to you, but we are unable to change the terms that have "
                   "existed.") == doctest::Approx(-0.2263).epsilon(1e-4));
    CHECK(compound("We are a group of talented young people who are making it "
                   "to the next level.") == doctest::Approx(0.5106).epsilon(1e-4));
    // published with masked profanity, so only the sign is pinned down
    CHECK(compound("They are just a bunch of dumb f**ks.") < -0.05);
}

TEST_CASE("frozen reference fixture matches exactly") {
    std::ifstream in(std::string(GROUPAUDIT_TEST_DATA_DIR) + "/vader_fixture.jsonl");
    REQUIRE(in.good());
    std::string line;
    std::size_t checked = 0;
    while (std::getline(in, line)) {
        auto j = nlohmann::json::parse(line);
        auto score = vader_compound(j.at("text").get<std::string>(), lexicon());
        CAPTURE(j.at("text").get<std::string>());
        CHECK(score.compound == doctest::Approx(j.at("compound").get<double>()).epsilon(1e-6));
        CHECK(score.pos == doctest::Approx(j.at("pos").get<double>()).epsilon(1e-6));
        CHECK(score.neu == doctest::Approx(j.at("neu").get<double>()).epsilon(1e-6));
        CHECK(score.neg == doctest::Approx(j.at("neg").get<double>()).epsilon(1e-6));
        ++checked;
    }
    CHECK(checked == 200);
}

TEST_CASE("booster words amplify, dampeners reduce") {
    CHECK(compound("The movie was very good") > compound("The movie was good"));
    CHECK(compound("The movie was marginally good") < compound("The movie was good"));
    CHECK(compound("The movie was very bad") < compound("The movie was bad"));
}

TEST_CASE("negation flips polarity") {
    CHECK(compound("The plan is good") > 0.05);
    CHECK(compound("The plan is not good") < 0);
    CHECK(compound("The plan is bad") < -0.05);
    CHECK(compound("The plan is not bad") > 0);
}

TEST_CASE("all-caps emphasis strengthens a mixed-case sentence") {
    CHECK(compound("The party was GREAT") > compound("The party was great"));
    CHECK(compound("The party was HORRIBLE") < compound("The party was horrible"));
}

TEST_CASE("but-clause shifts weight to the later clause") {
    double with_but = compound("The food is good but the service is horrible");
    double reversed = compound("The service is horrible but the food is good");
    CHECK(with_but < 0);
    CHECK(reversed > with_but);
}

TEST_CASE("exclamation marks only amplify") {
    // beyond three the punctuation bonus is capped
    std::mt19937 rng(99);
    const std::vector<std::string> bases = {
        "We are proud of this team",     "They are terrible neighbors",
        "What a wonderful surprise",     "This is a disaster",
        "The weather is nice today",     "Everyone hated the ending"};
    for (const auto& base : bases) {
        double prev = std::abs(compound(base));
        std::string s = base;
        for (int k = 1; k <= 3; ++k) {
            s += '!';
            double cur = std::abs(compound(s));
            CHECK(cur >= prev - 1e-12);
            prev = cur;
        }
    }
}

TEST_CASE("neutral filler sentences score zero") {
    auto score = vader_compound("the the the the", lexicon());
    CHECK(score.compound == doctest::Approx(0.0));
    CHECK(score.neu == doctest::Approx(1.0));
    CHECK(score.pos == doctest::Approx(0.0));
}

TEST_CASE("empty input yields the neutral unit score") {
    auto score = vader_compound("", lexicon());
    CHECK(score.compound == 0.0);
    CHECK(score.neu == 1.0);
    CHECK(score.pos == 0.0);
    CHECK(score.neg == 0.0);
}

TEST_CASE("idiom override beats word valences") {
    // "the bomb" is positive slang even though "bomb" alone is negative
    CHECK(compound("This show is the bomb") > 0.05);
    CHECK(compound("They found a bomb") < 0);
}

TEST_CASE("classification cutoffs at plus and minus 0.05") {
    CHECK(classify_threshold(0.051) == SentimentLabel::Positive);
    CHECK(classify_threshold(0.05) == SentimentLabel::Positive);
    CHECK(classify_threshold(0.049) == SentimentLabel::Neutral);
    CHECK(classify_threshold(-0.049) == SentimentLabel::Neutral);
    CHECK(classify_threshold(-0.05) == SentimentLabel::Negative);
    CHECK(classify_threshold(0.0) == SentimentLabel::Neutral);
}

TEST_CASE("pos, neu, neg proportions always sum to one") {
    std::mt19937 rng(4);
    const std::vector<std::string> vocab = {"we",   "love", "hate",  "great",
                                            "bad",  "not",  "very",  "the",
                                            "team", "plan", "VERY",  "ok!"};
    for (int trial = 0; trial < 200; ++trial) {
        std::string s;
        std::size_t n = 2 + rng() % 10;
        for (std::size_t i = 0; i < n; ++i) {
            if (!s.empty()) s += ' ';
            s += vocab[rng() % vocab.size()];
        }
        auto score = vader_compound(s, lexicon());
        CAPTURE(s);
        CHECK(score.pos + score.neu + score.neg == doctest::Approx(1.0).epsilon(1e-3));
        CHECK(score.compound >= -1.0);
        CHECK(score.compound <= 1.0);
    }
}
