#include "groupaudit/remote.hpp"

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "groupaudit/errors.hpp"

namespace groupaudit {

std::string content_hash(std::string_view text) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

namespace {

std::optional<SentimentLabel> cache_lookup(const RemoteClassifierConfig& cfg,
                                           const std::string& text) {
    if (!cfg.cache_dir) return std::nullopt;
    const auto path = *cfg.cache_dir / (content_hash(text) + ".json");
    std::ifstream in(path);
    if (!in) return std::nullopt;
    nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded() || !j.contains("label")) return std::nullopt;
    return label_from_string(j.at("label").get<std::string>());
}

void cache_store(const RemoteClassifierConfig& cfg, const std::string& text,
                 SentimentLabel label) {
    if (!cfg.cache_dir) return;
    std::filesystem::create_directories(*cfg.cache_dir);
    const auto path = *cfg.cache_dir / (content_hash(text) + ".json");
    const auto tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp);
        out << nlohmann::json{{"text", text}, {"label", to_string(label)}}.dump() << '\n';
    }
    std::filesystem::rename(tmp, path);  // atomic publish
}

std::vector<SentimentLabel> post_batch(const RemoteClassifierConfig& cfg,
                                       const std::vector<std::string>& texts) {
    httplib::Client client(cfg.base_url);
    client.set_connection_timeout(10);
    client.set_read_timeout(60);
    httplib::Headers headers;
    if (!cfg.api_key_env.empty()) {
        if (const char* key = std::getenv(cfg.api_key_env.c_str()))
            headers.emplace("Authorization", std::string("Bearer ") + key);
    }

    const std::string body = nlohmann::json{{"texts", texts}}.dump();

    std::size_t delay = cfg.backoff_ms;
    for (std::size_t attempt = 0;; ++attempt) {
        auto res = client.Post(cfg.path, headers, body, "application/json");
        if (res && res->status == 200) {
            nlohmann::json j = nlohmann::json::parse(res->body, nullptr, false);
            if (j.is_discarded() || !j.contains("labels") || !j["labels"].is_array())
                throw ProtocolError("classify_remote: response is not {labels: [...]}");
            if (j["labels"].size() != texts.size())
                throw ProtocolError("classify_remote: got " +
                                    std::to_string(j["labels"].size()) + " labels for " +
                                    std::to_string(texts.size()) + " inputs");
            std::vector<SentimentLabel> labels;
            labels.reserve(texts.size());
            for (const auto& l : j["labels"])
                labels.push_back(label_from_string(l.get<std::string>()));
            return labels;
        }
        if (attempt >= cfg.max_retries)
            throw AuditError("classify_remote: transport failure after " +
                             std::to_string(attempt + 1) + " attempts");
        std::this_thread::sleep_for(std::chrono::milliseconds(delay));
        delay *= 2;
    }
}

}  // namespace

std::vector<SentimentLabel> classify_remote(const std::vector<std::string>& batch,
                                            const RemoteClassifierConfig& endpoint) {
    std::vector<std::optional<SentimentLabel>> out(batch.size());
    std::vector<std::size_t> pending;
    for (std::size_t i = 0; i < batch.size(); ++i) {
        out[i] = cache_lookup(endpoint, batch[i]);
        if (!out[i]) pending.push_back(i);
    }

    for (std::size_t start = 0; start < pending.size(); start += endpoint.max_batch) {
        const std::size_t end = std::min(pending.size(), start + endpoint.max_batch);
        std::vector<std::string> texts;
        texts.reserve(end - start);
        for (std::size_t k = start; k < end; ++k) texts.push_back(batch[pending[k]]);
        std::vector<SentimentLabel> labels;
        try {
            labels = post_batch(endpoint, texts);
        } catch (const ProtocolError&) {
            throw;
        } catch (const AuditError& e) {
            std::vector<std::string> partial;
            for (std::size_t i = 0; i < batch.size(); ++i) {
                if (out[i]) partial.push_back(to_string(*out[i]));
            }
            throw BatchFailed(e.what(), std::move(partial));
        }
        for (std::size_t k = start; k < end; ++k) {
            out[pending[k]] = labels[k - start];
            cache_store(endpoint, batch[pending[k]], labels[k - start]);
        }
    }

    std::vector<SentimentLabel> result;
    result.reserve(batch.size());
    for (const auto& l : out) result.push_back(*l);
    return result;
}

}  // namespace groupaudit
