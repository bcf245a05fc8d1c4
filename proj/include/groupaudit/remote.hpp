#ifndef GROUPAUDIT_REMOTE_HPP
#define GROUPAUDIT_REMOTE_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "groupaudit/types.hpp"

namespace groupaudit {

struct RemoteClassifierConfig {
    std::string base_url;               // e.g. http://localhost:8080
    std::string path = "/classify";
    std::string api_key_env;            // env var holding the bearer token, optional
    std::size_t max_batch = 64;
    std::size_t max_retries = 3;
    std::size_t backoff_ms = 100;       // doubled per retry
    std::optional<std::filesystem::path> cache_dir;
};

// POSTs {"texts": [...]} and expects {"labels": [...]} with one 3-class
// label per input, order-preserving. Responses are cached per sentence by
// content hash so reruns are network-free. Transport failures retry with
// exponential backoff, then BatchFailed carrying the labels resolved so
// far; an arity or label mismatch is a ProtocolError.
std::vector<SentimentLabel> classify_remote(const std::vector<std::string>& batch,
                                            const RemoteClassifierConfig& endpoint);

// Stable 64-bit content hash used for cache file names (FNV-1a).
std::string content_hash(std::string_view text);

}  // namespace groupaudit

#endif
