#include "groupaudit/vader.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "groupaudit/errors.hpp"
#include "groupaudit/text.hpp"

namespace groupaudit {

namespace {

constexpr double kBoostCap = 0.733;    // all-caps emphasis increment
constexpr double kNegScalar = -0.74;   // negation flip factor
constexpr double kDampener = -0.293;   // bi-gram dampener ("sort of", "kind of")
constexpr double kAlpha = 15.0;        // normalization denominator constant

constexpr std::string_view kStrippablePunct = "!\"#$%&'()*+,-./:;<=>?@[\\]^_`{|}~";

const std::array<std::string_view, 17> kPuncList = {
    ".", "!", "?", ",", ";", ":", "-", "'", "\"",
    "!!", "!!!", "??", "???", "?!?", "!?!", "?!?!", "!?!?"};

bool is_punc_char(char c) { return kStrippablePunct.find(c) != std::string_view::npos; }

std::vector<std::string> split_ws(std::string_view s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(std::move(cur));
    return out;
}

// At least one upper-case letter and no lower-case letters.
bool is_upper_word(std::string_view w) {
    bool has_upper = false;
    for (char c : w) {
        if (std::islower(static_cast<unsigned char>(c))) return false;
        if (std::isupper(static_cast<unsigned char>(c))) has_upper = true;
    }
    return has_upper && !w.empty();
}

// Tokenization that keeps contractions and most emoticons: whitespace
// split, drop single-character tokens, then strip exactly one leading or
// trailing punctuation cluster when the remainder is a punctuation-free
// word of the same text.
std::vector<std::string> words_and_emoticons(std::string_view txt) {
    std::string no_punc;
    no_punc.reserve(txt.size());
    for (char c : txt) {
        if (!is_punc_char(c)) no_punc += c;
    }
    std::unordered_set<std::string> bare_words;
    for (auto& w : split_ws(no_punc)) {
        if (w.size() > 1) bare_words.insert(std::move(w));
    }

    std::vector<std::string> tokens;
    for (auto& t : split_ws(txt)) {
        if (t.size() <= 1) continue;
        std::string replaced = t;
        for (std::string_view p : kPuncList) {
            if (t.size() > p.size()) {
                if (t.compare(0, p.size(), p) == 0) {
                    std::string w = t.substr(p.size());
                    if (bare_words.count(w)) { replaced = std::move(w); break; }
                }
                if (t.compare(t.size() - p.size(), p.size(), p) == 0) {
                    std::string w = t.substr(0, t.size() - p.size());
                    if (bare_words.count(w)) { replaced = std::move(w); break; }
                }
            }
        }
        tokens.push_back(std::move(replaced));
    }
    return tokens;
}

// Exact match against the negation list (no case folding, mirroring the
// reference rules), plus any token containing "n't".
bool negated(const std::string& word, const SentimentLexicon& lex) {
    if (lex.negations.count(word)) return true;
    if (word.find("n't") != std::string::npos) return true;
    return false;
}

double round_fixed(double x, int digits) {
    const double scale = std::pow(10.0, digits);
    return std::floor(x * scale + 0.5) / scale;
}

double normalize_score(double score) {
    double norm = score / std::sqrt(score * score + kAlpha);
    return std::clamp(norm, -1.0, 1.0);
}

struct Context {
    const SentimentLexicon& lex;
    const std::vector<std::string>& words;
    const std::vector<std::string>& lower;
    bool is_cap_diff;
};

double booster_scalar(const Context& ctx, std::size_t i, double valence) {
    double scalar = 0.0;
    auto it = ctx.lex.boosters.find(ctx.lower[i]);
    if (it != ctx.lex.boosters.end()) {
        scalar = it->second;
        if (valence < 0) scalar = -scalar;
        if (ctx.is_cap_diff && is_upper_word(ctx.words[i])) {
            scalar += valence > 0 ? kBoostCap : -kBoostCap;
        }
    }
    return scalar;
}

double never_check(const Context& ctx, double valence, std::size_t dist, std::size_t i) {
    const auto& w = ctx.words;
    if (dist == 0) {
        if (negated(ctx.words[i - 1], ctx.lex)) valence *= kNegScalar;
    } else if (dist == 1) {
        if (w[i - 2] == "never" && (w[i - 1] == "so" || w[i - 1] == "this"))
            valence *= 1.5;
        else if (negated(ctx.words[i - 2], ctx.lex))
            valence *= kNegScalar;
    } else if (dist == 2) {
        if ((w[i - 3] == "never" && (w[i - 2] == "so" || w[i - 2] == "this")) ||
            (w[i - 1] == "so" || w[i - 1] == "this"))
            valence *= 1.25;
        else if (negated(ctx.words[i - 3], ctx.lex))
            valence *= kNegScalar;
    }
    return valence;
}

double idioms_check(const Context& ctx, double valence, std::size_t i) {
    const auto& w = ctx.words;
    auto join = [&](std::size_t a, std::size_t b) { return w[a] + " " + w[b]; };
    auto join3 = [&](std::size_t a, std::size_t b, std::size_t c) {
        return w[a] + " " + w[b] + " " + w[c];
    };

    // i >= 3 guaranteed by the caller (only invoked at distance 2).
    const std::string onezero = join(i - 1, i);
    const std::string twoonezero = join3(i - 2, i - 1, i);
    const std::string twoone = join(i - 2, i - 1);
    const std::string threetwoone = join3(i - 3, i - 2, i - 1);
    const std::string threetwo = join(i - 3, i - 2);

    for (const std::string* seq : {&onezero, &twoonezero, &twoone, &threetwoone, &threetwo}) {
        auto it = ctx.lex.idioms.find(*seq);
        if (it != ctx.lex.idioms.end()) {
            valence = it->second;
            break;
        }
    }
    if (i + 1 < w.size()) {
        auto it = ctx.lex.idioms.find(join(i, i + 1));
        if (it != ctx.lex.idioms.end()) valence = it->second;
    }
    if (i + 2 < w.size()) {
        auto it = ctx.lex.idioms.find(join3(i, i + 1, i + 2));
        if (it != ctx.lex.idioms.end()) valence = it->second;
    }
    if (ctx.lex.boosters.count(threetwo) || ctx.lex.boosters.count(twoone))
        valence += kDampener;
    return valence;
}

double least_check(const Context& ctx, double valence, std::size_t i) {
    if (i > 1 && ctx.lower[i - 1] == "least" && !ctx.lex.entries.count(ctx.lower[i - 1])) {
        if (ctx.lower[i - 2] != "at" && ctx.lower[i - 2] != "very") valence *= kNegScalar;
    } else if (i == 1 && ctx.lower[i - 1] == "least" &&
               !ctx.lex.entries.count(ctx.lower[i - 1])) {
        valence *= kNegScalar;
    }
    return valence;
}

double word_valence(const Context& ctx, std::size_t i) {
    auto it = ctx.lex.entries.find(ctx.lower[i]);
    if (it == ctx.lex.entries.end()) return 0.0;

    double valence = it->second;
    if (is_upper_word(ctx.words[i]) && ctx.is_cap_diff) {
        valence += valence > 0 ? kBoostCap : -kBoostCap;
    }
    for (std::size_t dist = 0; dist < 3; ++dist) {
        if (i > dist && !ctx.lex.entries.count(ctx.lower[i - dist - 1])) {
            double s = booster_scalar(ctx, i - dist - 1, valence);
            if (dist == 1 && s != 0.0) s *= 0.95;
            if (dist == 2 && s != 0.0) s *= 0.9;
            valence += s;
            valence = never_check(ctx, valence, dist, i);
            if (dist == 2) valence = idioms_check(ctx, valence, i);
        }
    }
    return least_check(ctx, valence, i);
}

double exclamation_amplifier(std::string_view txt) {
    auto n = std::min<std::size_t>(std::count(txt.begin(), txt.end(), '!'), 4);
    return static_cast<double>(n) * 0.292;
}

double question_amplifier(std::string_view txt) {
    auto n = static_cast<std::size_t>(std::count(txt.begin(), txt.end(), '?'));
    if (n <= 1) return 0.0;
    return n <= 3 ? static_cast<double>(n) * 0.18 : 0.96;
}

std::unordered_map<std::string, double> load_valence_file(
    const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open lexicon file: " + path.string());
    std::unordered_map<std::string, double> map;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::size_t tab = line.find('\t');
        if (tab == std::string::npos)
            throw ConfigError("malformed lexicon line in " + path.string() + ": " + line);
        std::string token = text::to_lower(line.substr(0, tab));
        std::size_t tab2 = line.find('\t', tab + 1);
        std::string val = line.substr(tab + 1, tab2 == std::string::npos
                                                   ? std::string::npos
                                                   : tab2 - tab - 1);
        map[token] = std::stod(val);
    }
    return map;
}

}  // namespace

SentimentLexicon SentimentLexicon::load(const std::filesystem::path& data_dir) {
    return load_files(data_dir / "vader_lexicon.txt", data_dir / "vader_boosters.txt",
                      data_dir / "vader_negations.txt", data_dir / "vader_idioms.txt");
}

SentimentLexicon SentimentLexicon::load_files(const std::filesystem::path& lexicon,
                                              const std::filesystem::path& boosters,
                                              const std::filesystem::path& negations,
                                              const std::filesystem::path& idioms) {
    SentimentLexicon lex;
    lex.entries = load_valence_file(lexicon);
    lex.boosters = load_valence_file(boosters);
    lex.idioms = load_valence_file(idioms);

    std::ifstream in(negations);
    if (!in) throw ConfigError("cannot open negation list: " + negations.string());
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty()) lex.negations.insert(text::to_lower(line));
    }
    return lex;
}

SentimentScore vader_compound(std::string_view sentence,
                              const SentimentLexicon& lexicon) {
    std::vector<std::string> words = words_and_emoticons(sentence);
    if (words.empty()) return SentimentScore{0.0, 0.0, 1.0, 0.0};

    std::vector<std::string> lower;
    lower.reserve(words.size());
    for (const auto& w : words) lower.push_back(text::to_lower(w));

    std::size_t allcaps = 0;
    for (const auto& w : words) {
        if (is_upper_word(w)) ++allcaps;
    }
    const bool is_cap_diff = allcaps > 0 && allcaps < words.size();

    Context ctx{lexicon, words, lower, is_cap_diff};

    std::vector<double> sentiments;
    sentiments.reserve(words.size());
    for (std::size_t i = 0; i < words.size(); ++i) {
        // booster words themselves score zero; "kind of" handled as bi-gram
        if ((i + 1 < words.size() && lower[i] == "kind" && lower[i + 1] == "of") ||
            lexicon.boosters.count(lower[i])) {
            sentiments.push_back(0.0);
            continue;
        }
        sentiments.push_back(word_valence(ctx, i));
    }

    // contrastive conjunction: halve sentiment before "but", amplify after
    auto but_it = std::find(words.begin(), words.end(), "but");
    if (but_it == words.end()) but_it = std::find(words.begin(), words.end(), "BUT");
    if (but_it != words.end()) {
        const auto but_index = static_cast<std::size_t>(but_it - words.begin());
        for (std::size_t i = 0; i < sentiments.size(); ++i) {
            if (i < but_index) sentiments[i] *= 0.5;
            else if (i > but_index) sentiments[i] *= 1.5;
        }
    }

    double sum = 0.0;
    for (double s : sentiments) sum += s;
    const double punct_amp = exclamation_amplifier(sentence) + question_amplifier(sentence);
    if (sum > 0) sum += punct_amp;
    else if (sum < 0) sum -= punct_amp;

    double pos_sum = 0.0, neg_sum = 0.0;
    std::size_t neu_count = 0;
    for (double s : sentiments) {
        if (s > 0) pos_sum += s + 1.0;       // +1 offsets neutral words counted as 1
        else if (s < 0) neg_sum += s - 1.0;
        else ++neu_count;
    }
    if (pos_sum > std::fabs(neg_sum)) pos_sum += punct_amp;
    else if (pos_sum < std::fabs(neg_sum)) neg_sum -= punct_amp;

    const double total = pos_sum + std::fabs(neg_sum) + static_cast<double>(neu_count);

    SentimentScore out;
    out.compound = round_fixed(normalize_score(sum), 4);
    out.pos = round_fixed(std::fabs(pos_sum / total), 3);
    out.neg = round_fixed(std::fabs(neg_sum / total), 3);
    out.neu = round_fixed(std::fabs(static_cast<double>(neu_count) / total), 3);
    return out;
}

SentimentLabel classify_threshold(double compound) {
    if (compound >= 0.05) return SentimentLabel::Positive;
    if (compound <= -0.05) return SentimentLabel::Negative;
    return SentimentLabel::Neutral;
}

SentimentLabel classify_threshold(const SentimentScore& score) {
    return classify_threshold(score.compound);
}

}  // namespace groupaudit
