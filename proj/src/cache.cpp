#include "qtrm/cache.hpp"

namespace qtrm {

using nlohmann::json;

namespace {

json matrix_to_json(const Matrix<RatFunc>& m) {
    json rows = json::array();
    for (const auto& row : m) {
        json r = json::array();
        for (const auto& v : row) r.push_back(to_json(v));
        rows.push_back(std::move(r));
    }
    return rows;
}

Matrix<RatFunc> matrix_from_json(const json& j) {
    Matrix<RatFunc> m;
    for (const auto& row : j) {
        std::vector<RatFunc> r;
        for (const auto& v : row) r.push_back(ratfunc_from_json(v));
        m.push_back(std::move(r));
    }
    return m;
}

}  // namespace

DiskCache::DiskCache(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::filesystem::create_directories(dir_);
    std::filesystem::path manifest = dir_ / "manifest.json";
    if (std::filesystem::exists(manifest)) {
        try {
            require_schema(read_json(manifest), "manifest");
            return;
        } catch (const std::exception&) {
            // stale cache: fall through and restamp; entries with old
            // stamps are ignored on load
        }
    }
    write_json_atomic(manifest,
                      json{{"schema_version", kSchemaVersion}, {"kind", "manifest"}});
}

std::filesystem::path DiskCache::path_for(const std::string& kind, int w) const {
    return dir_ / (kind + "_w" + std::to_string(w) + ".json");
}

bool DiskCache::load(int w, Matrix<RatFunc>& P_in_m, Matrix<RatFunc>& m_in_P) {
    std::filesystem::path p = path_for("macdonald", w);
    if (!std::filesystem::exists(p)) return false;
    try {
        json j = read_json(p);
        require_schema(j, "transitions");
        P_in_m = matrix_from_json(j.at("P_in_m"));
        m_in_P = matrix_from_json(j.at("m_in_P"));
        return P_in_m.size() == partitions_of(w).size();
    } catch (const std::exception&) {
        return false;
    }
}

void DiskCache::store(int w, const Matrix<RatFunc>& P_in_m, const Matrix<RatFunc>& m_in_P) {
    json j{{"schema_version", kSchemaVersion},
           {"kind", "transitions"},
           {"weight", w},
           {"P_in_m", matrix_to_json(P_in_m)},
           {"m_in_P", matrix_to_json(m_in_P)}};
    write_json_atomic(path_for("macdonald", w), j);
}

bool DiskCache::load_ltable(int w, LTable<RatFunc>& out) {
    std::filesystem::path p = path_for("ltable", w);
    if (!std::filesystem::exists(p)) return false;
    try {
        out = ltable_from_json(read_json(p));
        return out.weight == w;
    } catch (const std::exception&) {
        return false;
    }
}

void DiskCache::store_ltable(const LTable<RatFunc>& t) {
    write_json_atomic(path_for("ltable", t.weight), ltable_to_json(t));
}

DiskCache::ASkewMemo DiskCache::load_askew(int wmax) {
    ASkewMemo memo;
    for (int w = 0; w <= wmax; ++w) {
        std::filesystem::path p = path_for("askew", w);
        if (!std::filesystem::exists(p)) continue;
        try {
            json j = read_json(p);
            require_schema(j, "askew");
            for (const auto& e : j.at("entries")) {
                int route = e.at("route").get<std::string>() == "kernel" ? 0 : 1;
                memo.emplace(std::make_tuple(route, partition_from_json(e.at("lambda")),
                                             partition_from_json(e.at("mu"))),
                             ratfunc_from_json(e.at("value")));
            }
        } catch (const std::exception&) {
            // ignore unreadable entries
        }
    }
    return memo;
}

void DiskCache::store_askew(const ASkewMemo& memo) {
    std::map<int, json> by_weight;
    for (const auto& [key, val] : memo) {
        const auto& [route, la, mu] = key;
        json e{{"route", route == 0 ? "kernel" : "skewQ"},
               {"lambda", to_json(la)},
               {"mu", to_json(mu)},
               {"value", to_json(val)}};
        auto [it, fresh] = by_weight.try_emplace(la.weight());
        if (fresh)
            it->second = json{{"schema_version", kSchemaVersion},
                              {"kind", "askew"},
                              {"weight", la.weight()},
                              {"entries", json::array()}};
        it->second["entries"].push_back(std::move(e));
    }
    for (const auto& [w, j] : by_weight) write_json_atomic(path_for("askew", w), j);
}

void preload_from_cache(DiskCache& cache, ToroidalEngine<RatFunc>& tor, int wmax) {
    tor.import_askew_memo(cache.load_askew(wmax));
    for (int w = 0; w <= wmax; ++w) {
        LTable<RatFunc> t;
        if (cache.load_ltable(w, t)) tor.import_ltable(std::move(t));
    }
}

void save_to_cache(DiskCache& cache, ToroidalEngine<RatFunc>& tor, int wmax) {
    cache.store_askew(tor.export_askew_memo());
    for (int w = 0; w <= wmax; ++w) cache.store_ltable(tor.L_table(w));
}

}  // namespace qtrm
