#pragma once

#include "amc/rng.hpp"
#include "amc/types.hpp"

#include <cstdint>
#include <vector>

namespace amc {

enum class CostKind { Uniform, PerColumn, PerEntry };

struct CostModel {
    CostKind kind = CostKind::Uniform;
    Vec column_cost;
    Mat entry_cost;

    static CostModel uniform() { return {}; }
    static CostModel per_column(Vec c) {
        CostModel m;
        m.kind = CostKind::PerColumn;
        m.column_cost = std::move(c);
        return m;
    }
    static CostModel per_entry(Mat c) {
        CostModel m;
        m.kind = CostKind::PerEntry;
        m.entry_cost = std::move(c);
        return m;
    }

    double cost_of(int i, int j) const {
        switch (kind) {
            case CostKind::Uniform: return 1.0;
            case CostKind::PerColumn: return column_cost(j);
            case CostKind::PerEntry: return entry_cost(i, j);
        }
        return 1.0;
    }
};

enum class NoiseKind { Clean, SparseColumns, Bounded };

struct NoiseSpec {
    NoiseKind kind = NoiseKind::Clean;
    int sparse_count = 0;
    double bounded_eps = 0.0;

    static NoiseSpec clean() { return {}; }
    static NoiseSpec sparse_columns(int count) {
        NoiseSpec s;
        s.kind = NoiseKind::SparseColumns;
        s.sparse_count = count;
        return s;
    }
    static NoiseSpec bounded(double eps) {
        NoiseSpec s;
        s.kind = NoiseKind::Bounded;
        s.bounded_eps = eps;
        return s;
    }
};

struct OracleStats {
    long long count = 0;
    double cost = 0.0;
    std::vector<long long> phase_counts;
};

// Metered access to a hidden matrix. The noisy view is materialized once at
// construction; repeat observations of an entry are free.
class Oracle {
public:
    Oracle(Mat truth, CostModel cost, NoiseSpec noise, uint64_t seed);

    int rows() const { return static_cast<int>(view_.rows()); }
    int cols() const { return static_cast<int>(view_.cols()); }

    double observe(int i, int j);
    Vec observe_column(int j);
    Vec observe_row(int i);

    bool observed(int i, int j) const { return data_.observed(i, j); }
    double value(int i, int j) const { return data_.get(i, j); }

    // Uniform unobserved row of column j, or -1 when the column is exhausted.
    int draw_unobserved_uniform(int j, Rng& rng) const;

    void begin_phase();

    const OracleStats& stats() const { return stats_; }
    const PartialMatrix& data() const { return data_; }
    const CostModel& cost_model() const { return cost_; }

    // Harness accessors; recovery algorithms must not touch these.
    const Mat& truth() const { return truth_; }
    const Mat& noisy_view() const { return view_; }
    const Indices& injected_noisy_columns() const { return noisy_cols_; }
    bool integer_valued() const { return integer_valued_; }

private:
    Mat truth_;
    Mat view_;
    PartialMatrix data_;
    CostModel cost_;
    OracleStats stats_;
    Indices noisy_cols_;
    bool integer_valued_ = false;
};

}  // namespace amc
