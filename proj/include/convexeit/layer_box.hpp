#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace convexeit {

/// Per-layer conductivity bounds [lower_i, upper_i]. Layers with equal bounds
/// are pinned (known background) and drop out of every decision vector; the
/// remaining free layers keep their depth order.
class SigmaBox {
public:
    SigmaBox() = default;
    SigmaBox(std::vector<double> lower, std::vector<double> upper);

    /// Same interval on every layer.
    static SigmaBox uniform(std::size_t layers, double lower, double upper);

    std::size_t layers() const noexcept { return lower_.size(); }
    const std::vector<double>& lower() const noexcept { return lower_; }
    const std::vector<double>& upper() const noexcept { return upper_; }

    bool pinned(std::size_t layer) const { return lower_.at(layer) == upper_.at(layer); }
    const std::vector<std::size_t>& free_layers() const noexcept { return free_; }
    std::size_t free_count() const noexcept { return free_.size(); }

    std::vector<double> free_lower() const { return restrict(lower_); }
    std::vector<double> free_upper() const { return restrict(upper_); }

    /// Full conductivity vector from free coordinates (pinned layers filled in).
    std::vector<double> expand(std::span<const double> free) const;
    /// Free coordinates of a full vector.
    std::vector<double> restrict(std::span<const double> full) const;

    bool contains(std::span<const double> full, double tol = 0.0) const;

    bool operator==(const SigmaBox&) const = default;

private:
    std::vector<double> lower_;
    std::vector<double> upper_;
    std::vector<std::size_t> free_;
};

}  // namespace convexeit
