#ifndef GROUPAUDIT_GENERATION_HPP
#define GROUPAUDIT_GENERATION_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "groupaudit/types.hpp"

namespace groupaudit {

struct EndpointConfig {
    std::string base_url;
    std::string path = "/v1/completions";
    std::string api_key_env;
    std::string model_name;
    std::size_t max_new_tokens = 50;
    double top_p = 0.95;
    double temperature = 1.0;
    std::size_t max_parallel = 4;
    std::size_t max_retries = 3;
    std::size_t backoff_ms = 100;
};

enum class PromptMode { DefaultPrompt, InstructionPrompt };

struct GenerationTask {
    PromptMode mode = PromptMode::DefaultPrompt;
    Group group = Group::Ingroup;
    std::size_t target_raw_count = 0;
    std::optional<std::filesystem::path> context_corpus;  // InstructionPrompt only
    std::uint64_t seed = 0;  // drives context sampling
};

std::string group_prefix(Group g);  // "We are" / "They are"

// DefaultPrompt renders the bare group prefix; InstructionPrompt renders
// "Context: <sentence> Now generate a sentence starting with '<prefix>'".
// Missing context for InstructionPrompt is a ConfigError.
std::string render_prompt(const GenerationTask& task,
                          const std::optional<std::string>& context_sentence);

// Uniform, seed-reproducible draw from a line-per-sentence corpus file.
std::string sample_context(const std::filesystem::path& context_corpus,
                           std::uint64_t seed);
std::string sample_context(const std::vector<std::string>& sentences,
                           std::uint64_t seed);

// Collects target_raw_count completions from a completions-style endpoint.
// Each request index is cached on disk keyed by (model, mode, group,
// index), so interrupted runs resume without duplicate spend and cache
// replay is byte-identical and network-free.
std::vector<RawDocument> generate_batch(const GenerationTask& task,
                                        const EndpointConfig& endpoint,
                                        const std::filesystem::path& cache_dir);

}  // namespace groupaudit

#endif
