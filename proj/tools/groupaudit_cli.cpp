// Batch CLI for group-sentiment bias audits. Subcommands pipe JSONL
// through stdin/stdout so stages compose: extract | score | audit.

#include <fstream>
#include <iostream>
#include <memory>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "groupaudit/ablation.hpp"
#include "groupaudit/audit.hpp"
#include "groupaudit/errors.hpp"
#include "groupaudit/forest.hpp"
#include "groupaudit/generation.hpp"

using namespace groupaudit;

namespace {

std::string default_data_dir() {
#ifdef GROUPAUDIT_DATA_DIR
    return GROUPAUDIT_DATA_DIR;
#else
    return "data";
#endif
}

std::istream& open_input(std::ifstream& file, const std::string& path) {
    if (path.empty() || path == "-") return std::cin;
    file.open(path);
    if (!file) throw ConfigError("cannot open " + path);
    return file;
}

std::ostream& open_output(std::ofstream& file, const std::string& path) {
    if (path.empty() || path == "-") return std::cout;
    file.open(path);
    if (!file) throw ConfigError("cannot write " + path);
    return file;
}

std::vector<RawDocument> read_docs(std::istream& in, const std::string& format) {
    if (format == "jsonl") return read_documents_jsonl(in);
    if (format == "text") return read_documents_text(in);
    if (format == "conversations") return read_conversations_jsonl(in);
    throw ConfigError("unknown input format: " + format);
}

void add_filter_flags(CLI::App* cmd, FilterConfig& filter, std::string& scope) {
    cmd->add_option("--min-chars", filter.min_chars, "Minimum characters per sentence");
    cmd->add_option("--min-words", filter.min_words, "Minimum words per sentence");
    cmd->add_option("--ngram", filter.ngram_order, "Dedup n-gram order");
    cmd->add_option("--quota", filter.quota_per_group, "Sentences kept per group");
    cmd->add_option("--dedup-scope", scope, "Dedup scope: group or global")
        ->check(CLI::IsMember({"group", "global"}));
}

ScaleMode parse_scale(const std::string& s) {
    if (s == "zscore") return ScaleMode::zscore;
    if (s == "center") return ScaleMode::center;
    if (s == "none") return ScaleMode::none;
    throw ConfigError("unknown scale mode: " + s);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Ingroup/outgroup sentiment bias auditor"};
    app.require_subcommand(1);

    std::string input, output, format = "jsonl", data_dir = default_data_dir();

    // extract
    auto* extract = app.add_subcommand(
        "extract", "Pull 'We are' / 'They are' sentences out of documents");
    extract->add_option("-i,--input", input, "Input file, '-' for stdin");
    extract->add_option("-o,--output", output, "Output file, '-' for stdout");
    extract->add_option("--format", format, "jsonl, text, or conversations")
        ->check(CLI::IsMember({"jsonl", "text", "conversations"}));
    bool case_insensitive = false;
    extract->add_flag("--case-insensitive", case_insensitive,
                      "Match prefixes ignoring case");

    // score
    auto* score = app.add_subcommand("score", "Attach sentiment labels to records");
    score->add_option("-i,--input", input, "Records JSONL, '-' for stdin");
    score->add_option("-o,--output", output, "Output file, '-' for stdout");
    score->add_option("--data-dir", data_dir, "Lexicon data directory");
    std::string classifier = "vader";
    score->add_option("--classifier", classifier, "vader or remote")
        ->check(CLI::IsMember({"vader", "remote"}));
    RemoteClassifierConfig remote_cfg;
    std::string remote_cache;
    score->add_option("--remote-url", remote_cfg.base_url, "Remote classifier base URL");
    score->add_option("--remote-path", remote_cfg.path, "Remote classifier path");
    score->add_option("--api-key-env", remote_cfg.api_key_env,
                      "Env var holding the bearer token");
    score->add_option("--max-batch", remote_cfg.max_batch, "Sentences per request");
    score->add_option("--cache-dir", remote_cache, "Response cache directory");

    // audit
    auto* audit = app.add_subcommand(
        "audit", "Full pipeline: ingest, filter, score, fit, report");
    AuditRunConfig run;
    run.data_dir = default_data_dir();
    std::vector<std::string> unit_args;
    std::string pipeline = "corpus", scale = "zscore", dedup_scope = "group";
    audit->add_option("--unit", unit_args, "name=path, repeatable")->required();
    audit->add_option("--pipeline", pipeline, "corpus or conversations")
        ->check(CLI::IsMember({"corpus", "conversations"}));
    audit->add_option("--classifier", classifier, "vader or remote")
        ->check(CLI::IsMember({"vader", "remote"}));
    audit->add_option("--remote-url", remote_cfg.base_url, "Remote classifier base URL");
    audit->add_option("--api-key-env", remote_cfg.api_key_env,
                      "Env var holding the bearer token");
    audit->add_option("--data-dir", run.data_dir, "Lexicon data directory");
    audit->add_option("--out-dir", run.out_dir, "Report output directory")->required();
    audit->add_option("--seed", run.seed, "Global seed recorded in reports");
    audit->add_option("--scale", scale, "Token-count scaling: zscore, center, none")
        ->check(CLI::IsMember({"zscore", "center", "none"}));
    audit->add_option("--significance", run.significance, "Significance threshold");
    add_filter_flags(audit, run.filter, dedup_scope);

    // generate
    auto* generate = app.add_subcommand(
        "generate", "Collect prefix completions from a completions endpoint");
    EndpointConfig endpoint;
    GenerationTask task;
    std::string mode = "default", group = "ingroup", gen_cache = "generation_cache";
    std::string context_corpus;
    generate->add_option("--base-url", endpoint.base_url, "Endpoint base URL")->required();
    generate->add_option("--path", endpoint.path, "Completions path");
    generate->add_option("--model", endpoint.model_name, "Model name")->required();
    generate->add_option("--api-key-env", endpoint.api_key_env,
                         "Env var holding the bearer token");
    generate->add_option("--max-new-tokens", endpoint.max_new_tokens, "Completion budget");
    generate->add_option("--top-p", endpoint.top_p, "Nucleus sampling mass");
    generate->add_option("--temperature", endpoint.temperature, "Sampling temperature");
    generate->add_option("--mode", mode, "default or instruction")
        ->check(CLI::IsMember({"default", "instruction"}));
    generate->add_option("--group", group, "ingroup or outgroup")
        ->check(CLI::IsMember({"ingroup", "outgroup"}));
    generate->add_option("--count", task.target_raw_count, "Completions to collect")
        ->required();
    generate->add_option("--context-corpus", context_corpus,
                         "Line-per-sentence context pool (instruction mode)");
    generate->add_option("--seed", task.seed, "Context sampling seed");
    generate->add_option("--cache-dir", gen_cache, "Completion cache directory");
    generate->add_option("-o,--output", output, "Documents JSONL, '-' for stdout");

    // ablate
    auto* ablate = app.add_subcommand(
        "ablate", "Strip a fraction of ingroup-positive / outgroup-negative sentences");
    AblationSpec aspec;
    std::string remove_unit = "sentence", stats_path, group_lexicon_path;
    ablate->add_option("-i,--input", input, "Documents JSONL, '-' for stdin");
    ablate->add_option("-o,--output", output, "Training corpus lines, '-' for stdout");
    ablate->add_option("--keep-ingroup-positive", aspec.keep_ingroup_positive,
                       "Fraction of ingroup-positive sentences kept")
        ->check(CLI::Range(0.0, 1.0));
    ablate->add_option("--keep-outgroup-negative", aspec.keep_outgroup_negative,
                       "Fraction of outgroup-negative sentences kept")
        ->check(CLI::Range(0.0, 1.0));
    ablate->add_option("--seed", aspec.seed, "Removal seed");
    ablate->add_option("--remove-unit", remove_unit, "sentence or document")
        ->check(CLI::IsMember({"sentence", "document"}));
    ablate->add_option("--stats", stats_path, "Where to write removal stats JSON");
    ablate->add_option("--data-dir", data_dir, "Lexicon data directory");
    ablate->add_option("--group-lexicon", group_lexicon_path,
                       "Group word list (defaults to data-dir/group_lexicon.txt)");

    // report
    auto* report = app.add_subcommand("report", "Render a forest plot from unit reports");
    std::vector<std::string> report_files;
    std::string report_title = "Group sentiment odds ratios";
    report->add_option("files", report_files, "Per-unit report JSON files")->required();
    report->add_option("-o,--output", output, "SVG output path")->required();
    report->add_option("--title", report_title, "Plot title");

    CLI11_PARSE(app, argc, argv);

    try {
        std::ifstream in_file;
        std::ofstream out_file;

        if (*extract) {
            auto& in = open_input(in_file, input);
            auto& out = open_output(out_file, output);
            ExtractConfig cfg;
            cfg.case_sensitive = !case_insensitive;
            auto result = extract_prefixed(read_docs(in, format), cfg);
            write_records_jsonl(out, result.records);
            for (const auto& e : result.errors)
                std::cerr << "extract: " << e.doc_id << ": " << e.message << '\n';
        } else if (*score) {
            auto& in = open_input(in_file, input);
            auto& out = open_output(out_file, output);
            auto records = read_records_jsonl(in);
            auto lexicon = SentimentLexicon::load(data_dir);
            std::optional<RemoteClassifierConfig> remote;
            if (classifier == "remote") {
                if (!remote_cache.empty()) remote_cfg.cache_dir = remote_cache;
                remote = remote_cfg;
            }
            score_records(records,
                          classifier == "remote" ? Classifier::remote : Classifier::vader,
                          lexicon, remote);
            write_records_jsonl(out, records);
        } else if (*audit) {
            run.pipeline = pipeline == "conversations" ? Pipeline::audit_conversations
                                                       : Pipeline::audit_corpus;
            run.classifier = classifier == "remote" ? Classifier::remote
                                                    : Classifier::vader;
            if (run.classifier == Classifier::remote) run.remote = remote_cfg;
            run.scale = parse_scale(scale);
            run.filter.dedup_scope = dedup_scope == "global"
                                         ? FilterConfig::DedupScope::global
                                         : FilterConfig::DedupScope::group;
            for (const auto& arg : unit_args) {
                auto eq = arg.find('=');
                if (eq == std::string::npos)
                    throw ConfigError("--unit expects name=path, got: " + arg);
                run.units.push_back({arg.substr(0, eq), arg.substr(eq + 1)});
            }
            auto result = run_audit(run);
            for (const auto& u : result.units) {
                if (u.ok)
                    std::cerr << u.unit << ": ok ("
                              << u.report->ingroup_solidarity.formatted << " / "
                              << u.report->outgroup_hostility.formatted << ")\n";
                else
                    std::cerr << u.unit << ": FAILED: " << u.error << '\n';
            }
            if (!result.all_ok()) return 1;
        } else if (*generate) {
            task.mode = mode == "instruction" ? PromptMode::InstructionPrompt
                                              : PromptMode::DefaultPrompt;
            task.group = group == "outgroup" ? Group::Outgroup : Group::Ingroup;
            if (!context_corpus.empty()) task.context_corpus = context_corpus;
            auto docs = generate_batch(task, endpoint, gen_cache);
            auto& out = open_output(out_file, output);
            for (const auto& d : docs) {
                nlohmann::json j = d;
                out << j.dump() << '\n';
            }
        } else if (*ablate) {
            auto& in = open_input(in_file, input);
            auto& out = open_output(out_file, output);
            auto docs = read_documents_jsonl(in);
            if (group_lexicon_path.empty())
                group_lexicon_path = data_dir + "/group_lexicon.txt";
            auto groups = GroupLexicon::load(group_lexicon_path);
            auto sentiment = SentimentLexicon::load(data_dir);
            auto sentences = label_training_corpus(docs, groups, sentiment);
            aspec.remove_unit = remove_unit == "document" ? RemoveUnit::Document
                                                          : RemoveUnit::Sentence;
            auto stats = apply_ablation(sentences, aspec);
            for (const auto& line : rejoin_documents(sentences)) out << line << '\n';
            if (!stats_path.empty()) {
                std::ofstream sf(stats_path);
                sf << stats.to_json().dump(2) << '\n';
            } else {
                std::cerr << stats.to_json().dump() << '\n';
            }
        } else if (*report) {
            ForestPlotSpec spec{report_title, {}};
            for (const auto& path : report_files) {
                std::ifstream f(path);
                if (!f) throw ConfigError("cannot open " + path);
                nlohmann::json j = nlohmann::json::parse(f);
                for (const char* measure : {"ingroup_solidarity", "outgroup_hostility"}) {
                    const auto& m = j.at(measure).at("estimate");
                    spec.rows.push_back(
                        {j.at("unit").get<std::string>(),
                         measure[0] == 'i' ? "solidarity" : "hostility",
                         m.at("OR").get<double>(), m.at("ci95")[0].get<double>(),
                         m.at("ci95")[1].get<double>()});
                }
            }
            emit_forest_plot(spec, output);
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const AuditError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
