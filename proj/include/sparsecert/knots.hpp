#pragma once

#include <vector>

#include "sparsecert/family.hpp"
#include "sparsecert/types.hpp"

namespace sparsecert {

struct Knot {
    double location = 0.0;
    int multiplicity = 1; // 1 or 2 (derivative row included for 2)
    bool endpoint = false;
};

/// Ordered zero locations with multiplicities and endpoint flags.
/// Endpoint knots have multiplicity 1 and sit on the interval boundary.
class KnotSet {
public:
    KnotSet(std::vector<Knot> entries, Interval interval);

    const std::vector<Knot>& entries() const noexcept { return entries_; }
    const Interval& interval() const noexcept { return interval_; }
    std::size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }

    /// Position index: 2 per interior knot, 1 per boundary knot.
    int index() const noexcept;

    /// Number of determinant rows: the sum of multiplicities.
    int row_count() const noexcept;

    bool contains_location(double x, double tol = 0.0) const noexcept;
    std::vector<double> interior_locations() const;

    PointTuple to_point_tuple() const;

private:
    std::vector<Knot> entries_;
    Interval interval_;
};

inline int index(const KnotSet& ks) { return ks.index(); }

} // namespace sparsecert
