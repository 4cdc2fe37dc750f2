#include "arqft/cache.hpp"

#include <openssl/evp.h>

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <unistd.h>

namespace arqft {

std::string DiskCache::digest(const std::string& canonical) {
    const std::string text = "v" + std::to_string(kSchema) + "\n" + canonical;
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (!EVP_Digest(text.data(), text.size(), md, &len, EVP_sha256(), nullptr))
        throw std::runtime_error("sha256 failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 15];
    }
    return out;
}

std::filesystem::path DiskCache::path_for(const std::string& canonical) const {
    const std::string h = digest(canonical);
    return dir_ / h.substr(0, 2) / (h + ".txt");
}

std::optional<std::string> DiskCache::get(const std::string& canonical) const {
    if (!enabled()) return std::nullopt;
    std::ifstream in(path_for(canonical), std::ios::binary);
    if (!in) return std::nullopt;
    std::string key_line;
    std::getline(in, key_line);
    // guard against digest collisions and stale schema
    if (key_line != canonical.substr(0, canonical.find('\n'))) return std::nullopt;
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void DiskCache::put(const std::string& canonical, const std::string& payload) const {
    if (!enabled()) return;
    static std::atomic<unsigned> counter{0};
    const auto target = path_for(canonical);
    std::filesystem::create_directories(target.parent_path());
    auto tmp = target;
    tmp += ".tmp." + std::to_string(::getpid()) + "." + std::to_string(counter++);
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write cache file " + tmp.string());
        out << canonical.substr(0, canonical.find('\n')) << '\n' << payload;
        if (!out) throw std::runtime_error("cache write failed " + tmp.string());
    }
    std::filesystem::rename(tmp, target);
}

std::string default_cache_dir() {
    const char* env = std::getenv("ARQFT_CACHE");
    return env ? std::string(env) : std::string();
}

}  // namespace arqft
