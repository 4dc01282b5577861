#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace convexeit {

/// Dense symmetric matrix, full row-major storage. Writes go through set()
/// which mirrors, so symmetry holds exactly.
class SymMatrix {
public:
    SymMatrix() = default;
    explicit SymMatrix(std::size_t order) : order_(order), data_(order * order, 0.0) {}

    static SymMatrix identity(std::size_t order);
    static SymMatrix diagonal(std::span<const double> diag);

    /// Throws std::invalid_argument unless values is order*order and symmetric
    /// to within tol (the lower triangle is then replaced by the upper one).
    static SymMatrix from_row_major(std::size_t order, std::span<const double> values, double tol = 0.0);

    std::size_t order() const noexcept { return order_; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * order_ + j]; }
    void set(std::size_t i, std::size_t j, double v)
    {
        data_[i * order_ + j] = v;
        data_[j * order_ + i] = v;
    }

    std::span<const double> row(std::size_t i) const { return {data_.data() + i * order_, order_}; }
    std::span<const double> values() const noexcept { return data_; }

    std::vector<double> diag() const;
    double frobenius_norm() const;

    SymMatrix& operator+=(const SymMatrix& other);
    SymMatrix& operator-=(const SymMatrix& other);
    SymMatrix& operator*=(double s);
    SymMatrix& add_identity(double s);

    friend SymMatrix operator+(SymMatrix a, const SymMatrix& b) { return a += b; }
    friend SymMatrix operator-(SymMatrix a, const SymMatrix& b) { return a -= b; }
    friend SymMatrix operator*(double s, SymMatrix a) { return a *= s; }

    bool operator==(const SymMatrix&) const = default;

    /// v^T A v.
    double quadratic_form(std::span<const double> v) const;

private:
    void require_same_order(const SymMatrix& other) const;

    std::size_t order_ = 0;
    std::vector<double> data_;
};

/// Plain-text CSV, one matrix row per line, shortest round-trip decimals.
/// Lines starting with '#' are comments.
void write_csv(std::ostream& out, const SymMatrix& a);
SymMatrix read_csv(std::istream& in);
void save_csv(const std::string& path, const SymMatrix& a);
SymMatrix load_csv(const std::string& path);

}  // namespace convexeit
