#include "qtrm/json_io.hpp"

#include <fstream>

namespace qtrm {

using nlohmann::json;

namespace {

json poly_to_json(const MultiPoly& p) {
    json terms = json::array();
    for (const auto& [e, c] : p.terms()) {
        json ej = json::array();
        for (int i = 0; i < kNumVars; ++i) ej.push_back(e[static_cast<std::size_t>(i)]);
        terms.push_back(json::array({c.get_str(), ej}));
    }
    return terms;
}

MultiPoly poly_from_json(const json& j) {
    MultiPoly p;
    for (const auto& term : j) {
        mpz_class c(term.at(0).get<std::string>());
        Expo e{};
        for (int i = 0; i < kNumVars; ++i)
            e[static_cast<std::size_t>(i)] = term.at(1).at(static_cast<std::size_t>(i)).get<int>();
        p += MultiPoly::monomial(c, e);
    }
    return p;
}

}  // namespace

json to_json(const RatFunc& f) {
    return json{{"num", poly_to_json(f.num())}, {"den", poly_to_json(f.den())}};
}

RatFunc ratfunc_from_json(const json& j) {
    return RatFunc(poly_from_json(j.at("num")), poly_from_json(j.at("den")));
}

json to_json(const Partition& p) {
    json a = json::array();
    for (int x : p.parts()) a.push_back(x);
    return a;
}

Partition partition_from_json(const json& j) {
    std::vector<int> parts;
    for (const auto& x : j) parts.push_back(x.get<int>());
    return Partition(std::move(parts));
}

void require_schema(const json& j, const std::string& kind) {
    int v = j.value("schema_version", -1);
    if (v != kSchemaVersion)
        throw schema_error("schema_version mismatch: expected " +
                           std::to_string(kSchemaVersion) + ", found " + std::to_string(v));
    std::string k = j.value("kind", "");
    if (!kind.empty() && k != kind)
        throw schema_error("kind mismatch: expected '" + kind + "', found '" + k + "'");
}

namespace {

json pair_table_to_json(int weight, const char* kind,
                        const std::map<PartitionPair, RatFunc, PartitionPairLess>& entries) {
    json out{{"schema_version", kSchemaVersion}, {"kind", kind}, {"weight", weight}};
    json ej = json::array();
    for (const auto& [pr, val] : entries)
        ej.push_back(json{{"alpha", to_json(pr.first)},
                          {"beta", to_json(pr.second)},
                          {"value", to_json(val)}});
    out["entries"] = std::move(ej);
    return out;
}

void pair_table_from_json(const json& j,
                          std::map<PartitionPair, RatFunc, PartitionPairLess>& entries) {
    for (const auto& e : j.at("entries"))
        entries.emplace(PartitionPair{partition_from_json(e.at("alpha")),
                                      partition_from_json(e.at("beta"))},
                        ratfunc_from_json(e.at("value")));
}

}  // namespace

json ltable_to_json(const LTable<RatFunc>& t) {
    return pair_table_to_json(t.weight, "ltable", t.entries);
}

LTable<RatFunc> ltable_from_json(const json& j) {
    require_schema(j, "ltable");
    LTable<RatFunc> t;
    t.weight = j.at("weight").get<int>();
    pair_table_from_json(j, t.entries);
    return t;
}

json rbar_to_json(const RbarCoeffs<RatFunc>& t) {
    return pair_table_to_json(t.weight, "rbar", t.entries);
}

RbarCoeffs<RatFunc> rbar_from_json(const json& j) {
    require_schema(j, "rbar");
    RbarCoeffs<RatFunc> t;
    t.weight = j.at("weight").get<int>();
    pair_table_from_json(j, t.entries);
    return t;
}

json block_to_json(const FockBlock<RatFunc>& b) {
    json out{{"schema_version", kSchemaVersion},
             {"kind", "block"},
             {"weight", b.weight},
             {"convention", convention_name(b.convention)}};
    json basis = json::array();
    for (const auto& [a, be] : b.basis) basis.push_back(json::array({to_json(a), to_json(be)}));
    out["basis"] = std::move(basis);
    json rows = json::array();
    for (const auto& row : b.matrix) {
        json r = json::array();
        for (const auto& v : row) r.push_back(to_json(v));
        rows.push_back(std::move(r));
    }
    out["matrix"] = std::move(rows);
    return out;
}

FockBlock<RatFunc> block_from_json(const json& j) {
    require_schema(j, "block");
    FockBlock<RatFunc> b;
    b.weight = j.at("weight").get<int>();
    b.convention = j.at("convention").get<std::string>() == "bra-rows"
                       ? BlockConvention::BraRows
                       : BlockConvention::KetRows;
    for (const auto& pr : j.at("basis"))
        b.basis.emplace_back(partition_from_json(pr.at(0)), partition_from_json(pr.at(1)));
    for (const auto& row : j.at("matrix")) {
        std::vector<RatFunc> r;
        for (const auto& v : row) r.push_back(ratfunc_from_json(v));
        b.matrix.push_back(std::move(r));
    }
    return b;
}

json report_to_json(const CheckReport& r) {
    json out{{"schema_version", kSchemaVersion},
             {"kind", "report"},
             {"name", r.name},
             {"verdict", r.pass ? "pass" : "fail"}};
    json params = json::object();
    for (const auto& [k, v] : r.parameters) params[k] = v;
    out["parameters"] = std::move(params);
    if (!r.pass) out["counterexample"] = r.counterexample;
    return out;
}

std::string dump_canonical(const json& j) {
    return j.dump(2);  // keys are emitted in sorted order
}

void write_json_atomic(const std::filesystem::path& path, const json& j) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream os(tmp);
        if (!os) throw std::runtime_error("cannot write " + tmp.string());
        os << dump_canonical(j) << "\n";
    }
    std::filesystem::rename(tmp, path);
}

json read_json(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot read " + path.string());
    json j;
    is >> j;
    return j;
}

}  // namespace qtrm
