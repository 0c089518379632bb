#pragma once

#include <filesystem>
#include <memory>

#include "qtrm/json_io.hpp"

namespace qtrm {

/// Directory-backed cache for symbolic-mode artifacts: Macdonald
/// transition matrices, L-tables and a-coefficient memos, one file per
/// (kind, weight).  A manifest records the schema version; files with a
/// stale stamp are ignored and rewritten.  Writes go through a temp file
/// and a rename.
class DiskCache : public TransitionStore {
public:
    explicit DiskCache(std::filesystem::path dir);

    // TransitionStore
    bool load(int w, Matrix<RatFunc>& P_in_m, Matrix<RatFunc>& m_in_P) override;
    void store(int w, const Matrix<RatFunc>& P_in_m, const Matrix<RatFunc>& m_in_P) override;

    bool load_ltable(int w, LTable<RatFunc>& out);
    void store_ltable(const LTable<RatFunc>& t);

    using ASkewMemo = ToroidalEngine<RatFunc>::ASkewMemo;
    /// Loads every persisted a-coefficient with |lambda| <= wmax.
    ASkewMemo load_askew(int wmax);
    void store_askew(const ASkewMemo& memo);

    const std::filesystem::path& dir() const { return dir_; }

private:
    std::filesystem::path path_for(const std::string& kind, int w) const;
    std::filesystem::path dir_;
};

/// Attach a cache directory to an engine pair (transition matrices via
/// the store hook, L-tables and a-memos preloaded into the engine).
void preload_from_cache(DiskCache& cache, ToroidalEngine<RatFunc>& tor, int wmax);
/// Persist what the run produced.
void save_to_cache(DiskCache& cache, ToroidalEngine<RatFunc>& tor, int wmax);

}  // namespace qtrm
