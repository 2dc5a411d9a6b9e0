#include "sparsecert/verdict.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace sparsecert {

namespace {

struct Scan {
    const FunctionFamily& fam;
    const SamplingConfig& cfg;
    bool confluent = false;

    Verdict verdict;
    int sign = 0;
    bool vanished = false;
    double min_abs = std::numeric_limits<double>::infinity();

    // returns false once a Fail witness is found
    bool check(const std::vector<double>& tuple) {
        PointTuple pts(tuple);
        Matrix m = confluent ? confluent_alternant(fam, pts) : alternant_matrix(fam, pts);
        ScaledDet d = scaled_determinant(m);
        ++verdict.tuples_checked;
        if (d.structural_zero) {
            verdict.kind = VerdictKind::fail;
            verdict.witness = pts;
            return false;
        }
        min_abs = std::min(min_abs, std::fabs(d.scaled));
        if (d.sign == 0 || std::fabs(d.scaled) <= cfg.vanish_tol) {
            vanished = true;
            return true;
        }
        if (sign == 0) {
            sign = d.sign;
        } else if (sign != d.sign) {
            verdict.kind = VerdictKind::fail;
            verdict.witness = pts;
            return false;
        }
        return true;
    }

    Verdict finish() {
        verdict.min_abs_scaled_det = std::isfinite(min_abs) ? min_abs : 0.0;
        verdict.common_sign = sign;
        if (verdict.kind != VerdictKind::fail)
            verdict.kind = vanished ? VerdictKind::inconclusive : VerdictKind::pass;
        return verdict;
    }
};

std::vector<double> make_grid(double lo, double hi, int points) {
    std::vector<double> g(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i)
        g[static_cast<std::size_t>(i)] = lo + (hi - lo) * static_cast<double>(i) / (points - 1);
    return g;
}

// all strictly increasing index tuples (T check) or nondecreasing tuples
// with per-value multiplicity <= cap (ET check), in lexicographic order
template <typename F>
bool enumerate_tuples(int grid_size, int k, bool allow_repeats, int cap, F&& emit) {
    std::vector<int> idx(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = allow_repeats ? 0 : i;
    if (!allow_repeats && k > grid_size) return true;

    auto multiplicity_ok = [&]() {
        int run = 1;
        for (int i = 1; i < k; ++i) {
            run = idx[static_cast<std::size_t>(i)] == idx[static_cast<std::size_t>(i) - 1] ? run + 1 : 1;
            if (run > cap) return false;
        }
        return true;
    };

    while (true) {
        if (multiplicity_ok()) {
            if (!emit(idx)) return false;
        }
        int pos = k - 1;
        while (pos >= 0) {
            const int limit = allow_repeats ? grid_size - 1 : grid_size - 1 - (k - 1 - pos);
            if (idx[static_cast<std::size_t>(pos)] < limit) break;
            --pos;
        }
        if (pos < 0) return true;
        ++idx[static_cast<std::size_t>(pos)];
        for (int i = pos + 1; i < k; ++i)
            idx[static_cast<std::size_t>(i)] =
                allow_repeats ? idx[static_cast<std::size_t>(pos)] : idx[static_cast<std::size_t>(i) - 1] + 1;
    }
}

std::pair<double, double> scan_window(const Interval& iv, const SamplingConfig& cfg) {
    if (!iv.is_halfline()) return {iv.a, iv.b};
    return {0.0, std::max(cfg.halfline_horizon, 1.0)};
}

Verdict run_scan(const FunctionFamily& fam, const Interval& iv, const SamplingConfig& cfg,
                 bool confluent) {
    if (cfg.grid_points < 2)
        throw Error(errc::config_error, "sampling grid must have at least two points");
    const int k = static_cast<int>(fam.size());
    auto [lo, hi] = scan_window(iv, cfg);
    if (!(lo < hi))
        throw Error(errc::config_error, "empty scan window");

    Scan scan{fam, cfg, confluent, {}, 0, false,
              std::numeric_limits<double>::infinity()};

    auto grid = make_grid(lo, hi, cfg.grid_points);
    std::vector<double> tuple(static_cast<std::size_t>(k));
    auto emit_grid = [&](const std::vector<int>& idx) {
        for (int i = 0; i < k; ++i)
            tuple[static_cast<std::size_t>(i)] = grid[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])];
        return scan.check(tuple);
    };

    // adversarial endpoint clusters go first so boundary degeneracies
    // surface with a deterministic witness
    if (confluent) {
        const int cap = std::min(PointTuple::kMultiplicityCap, k);
        std::vector<std::vector<double>> lead;
        if (k <= cap) {
            lead.push_back(std::vector<double>(static_cast<std::size_t>(k), lo));
            lead.push_back(std::vector<double>(static_cast<std::size_t>(k), hi));
        } else {
            std::vector<double> t(static_cast<std::size_t>(k), lo);
            for (int i = cap; i < k; ++i)
                t[static_cast<std::size_t>(i)] = grid[static_cast<std::size_t>(i - cap + 1)];
            lead.push_back(t);
        }
        for (const auto& t : lead) {
            if (!scan.check(t)) return scan.finish();
        }
    } else {
        const double h = (hi - lo) * 1e-3;
        std::vector<double> near_a(static_cast<std::size_t>(k)), near_b(static_cast<std::size_t>(k));
        for (int i = 0; i < k; ++i) {
            near_a[static_cast<std::size_t>(i)] = lo + h * i;
            near_b[static_cast<std::size_t>(i)] = hi - h * (k - 1 - i);
        }
        if (!scan.check(near_a)) return scan.finish();
        if (!scan.check(near_b)) return scan.finish();
    }

    if (k <= 4) {
        if (!enumerate_tuples(cfg.grid_points, k, confluent, PointTuple::kMultiplicityCap,
                              emit_grid))
            return scan.finish();
    } else {
        // thinned sampling on a finer grid
        const int fine = std::max(cfg.grid_points, 192);
        auto fine_grid = make_grid(lo, hi, fine);
        std::mt19937_64 rng(cfg.seed);
        std::uniform_int_distribution<int> pick(0, fine - 1);
        std::uniform_int_distribution<int> mult(1, PointTuple::kMultiplicityCap);
        std::vector<int> idx;
        for (int trial = 0; trial < cfg.random_tuples; ++trial) {
            idx.clear();
            while (static_cast<int>(idx.size()) < k) {
                const int g = pick(rng);
                const int m = confluent ? mult(rng) : 1;
                for (int r = 0; r < m && static_cast<int>(idx.size()) < k; ++r) idx.push_back(g);
            }
            std::sort(idx.begin(), idx.end());
            if (!confluent) {
                bool dup = false;
                for (std::size_t i = 0; i + 1 < idx.size(); ++i)
                    if (idx[i] == idx[i + 1]) dup = true;
                if (dup) continue;
            }
            for (int i = 0; i < k; ++i)
                tuple[static_cast<std::size_t>(i)] =
                    fine_grid[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])];
            if (!scan.check(tuple)) return scan.finish();
        }
    }
    return scan.finish();
}

} // namespace

Verdict is_t_system(const FunctionFamily& fam, const Interval& iv, const SamplingConfig& cfg) {
    return run_scan(fam, iv, cfg, false);
}

Verdict is_et_system(const FunctionFamily& fam, const Interval& iv, const SamplingConfig& cfg) {
    return run_scan(fam, iv, cfg, true);
}

} // namespace sparsecert
