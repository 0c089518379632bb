#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "qtrm/fock.hpp"
#include "qtrm/verify.hpp"

namespace qtrm {

constexpr int kSchemaVersion = 1;

struct schema_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Exact JSON forms.  RatFunc: {"num": [[coef-string,[e_q,e_t,e_u,e_v]],...],
// "den": [...]} with terms in canonical (graded-lex) order; integers as
// decimal strings to avoid precision loss.
nlohmann::json to_json(const RatFunc& f);
RatFunc ratfunc_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Partition& p);
Partition partition_from_json(const nlohmann::json& j);

nlohmann::json ltable_to_json(const LTable<RatFunc>& t);
LTable<RatFunc> ltable_from_json(const nlohmann::json& j);

nlohmann::json rbar_to_json(const RbarCoeffs<RatFunc>& t);
RbarCoeffs<RatFunc> rbar_from_json(const nlohmann::json& j);

nlohmann::json block_to_json(const FockBlock<RatFunc>& b);
FockBlock<RatFunc> block_from_json(const nlohmann::json& j);

nlohmann::json report_to_json(const CheckReport& r);

/// Validates the stamp of any of our JSON documents; throws schema_error
/// naming expected/found versions (and kind, when requested).
void require_schema(const nlohmann::json& j, const std::string& kind);

/// Serialize with a fixed layout so repeated runs are byte-identical.
std::string dump_canonical(const nlohmann::json& j);

void write_json_atomic(const std::filesystem::path& path, const nlohmann::json& j);
nlohmann::json read_json(const std::filesystem::path& path);

}  // namespace qtrm
