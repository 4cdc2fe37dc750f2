#pragma once

#include <filesystem>
#include <optional>
#include <string>

namespace arqft {

// content-addressed on-disk store; an empty directory disables it
class DiskCache {
public:
    static constexpr int kSchema = 1;

    DiskCache() = default;
    explicit DiskCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

    bool enabled() const { return !dir_.empty(); }
    // sha256 over schema version plus the canonical argument text
    static std::string digest(const std::string& canonical);

    std::optional<std::string> get(const std::string& canonical) const;
    // write-temp-then-rename
    void put(const std::string& canonical, const std::string& payload) const;

private:
    std::filesystem::path path_for(const std::string& canonical) const;
    std::filesystem::path dir_;
};

// ARQFT_CACHE if set, else empty
std::string default_cache_dir();

}  // namespace arqft
