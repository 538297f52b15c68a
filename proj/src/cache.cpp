#include "nodalkit/cache.hpp"

#include "nodalkit/serialize.hpp"

#include <zlib.h>

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>
#include <unistd.h>

namespace nodalkit {

namespace {

std::string hex32(unsigned long x)
{
    char buf[9];
    std::snprintf(buf, sizeof buf, "%08lx", x & 0xfffffffful);
    return buf;
}

unsigned long crc_of(const std::string& s)
{
    return crc32(crc32(0L, Z_NULL, 0), reinterpret_cast<const Bytef*>(s.data()), static_cast<uInt>(s.size()));
}

std::string fmt(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

} // namespace

std::string CacheKey::canonical() const
{
    return "N=" + std::to_string(N) + ";p=" + fmt(p) + ";k=" + std::to_string(k) + ";rtol=" + fmt(rtol) +
           ";atol=" + fmt(atol) + ";r_max=" + fmt(r_max);
}

std::string CacheKey::name() const
{
    const std::string c = canonical();
    const unsigned long a = adler32(adler32(0L, Z_NULL, 0), reinterpret_cast<const Bytef*>(c.data()),
                                    static_cast<uInt>(c.size()));
    return "nodal-" + hex32(crc_of(c)) + hex32(a);
}

CacheKey cache_key(int k, int N, double p, const SolverConfig& cfg)
{
    CacheKey key;
    key.N = N;
    key.p = p;
    key.k = k;
    key.rtol = cfg.rtol;
    key.atol = cfg.atol;
    key.r_max = cfg.r_max;
    return key;
}

std::filesystem::path default_cache_dir()
{
    if (const char* env = std::getenv("NODALKIT_CACHE"); env && *env)
        return env;
    return ".nodalkit-cache";
}

std::string cache_store(const RadialSolution& u, const CacheKey& key, const std::filesystem::path& dir)
{
    static std::atomic<unsigned> counter{0};
    std::filesystem::create_directories(dir);
    const std::string payload = to_json(u).dump();
    Json doc;
    doc["schema"] = kSchemaVersion;
    doc["key"] = key.canonical();
    doc["crc32"] = hex32(crc_of(payload));
    doc["payload"] = payload;
    const std::filesystem::path final_path = dir / (key.name() + ".json");
    std::ostringstream tmp_name;
    tmp_name << key.name() << ".tmp." << ::getpid() << '.' << std::hash<std::thread::id>{}(std::this_thread::get_id())
             << '.' << counter++;
    const std::filesystem::path tmp = dir / tmp_name.str();
    {
        std::ofstream os(tmp, std::ios::binary);
        os << doc.dump() << '\n';
        if (!os)
            throw std::runtime_error("cache_store: cannot write " + tmp.string());
    }
    std::filesystem::rename(tmp, final_path);
    return key.name();
}

RadialSolution cache_load(const CacheKey& key, const std::filesystem::path& dir)
{
    const std::filesystem::path path = dir / (key.name() + ".json");
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw NotFoundError("cache_load: no entry for " + key.canonical());
    std::stringstream ss;
    ss << is.rdbuf();
    Json doc;
    try {
        doc = Json::parse(ss.str());
    } catch (const nlohmann::json::exception&) {
        throw IntegrityError("cache_load: unreadable entry " + path.string());
    }
    if (!doc.contains("key") || !doc["key"].is_string() || !doc.contains("payload") || !doc["payload"].is_string() ||
        !doc.contains("crc32"))
        throw IntegrityError("cache_load: malformed entry " + path.string());
    if (doc["key"].get<std::string>() != key.canonical())
        throw NotFoundError("cache_load: entry " + path.string() + " belongs to a different key");
    const std::string payload = doc["payload"].get<std::string>();
    if (doc["crc32"] != hex32(crc_of(payload)))
        throw IntegrityError("cache_load: checksum mismatch in " + path.string());
    try {
        return radial_from_json(Json::parse(payload));
    } catch (const nlohmann::json::exception&) {
        throw IntegrityError("cache_load: corrupted payload in " + path.string());
    }
}

RadialSolution solve_cached(int k, int N, double p, const SolverConfig& cfg, const std::filesystem::path& dir)
{
    const CacheKey key = cache_key(k, N, p, cfg);
    try {
        return cache_load(key, dir);
    } catch (const NotFoundError&) {
    }
    RadialSolution u = find_nodal(k, N, p, cfg);
    cache_store(u, key, dir);
    return u;
}

} // namespace nodalkit
