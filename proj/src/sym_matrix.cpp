#include "convexeit/sym_matrix.hpp"

#include "convexeit/kernels/kernels.hpp"

#include <fmt/format.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace convexeit {

SymMatrix SymMatrix::identity(std::size_t order)
{
    SymMatrix a(order);
    for (std::size_t i = 0; i < order; ++i)
        a.data_[i * order + i] = 1.0;
    return a;
}

SymMatrix SymMatrix::diagonal(std::span<const double> diag)
{
    SymMatrix a(diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i)
        a.data_[i * diag.size() + i] = diag[i];
    return a;
}

SymMatrix SymMatrix::from_row_major(std::size_t order, std::span<const double> values, double tol)
{
    if (values.size() != order * order)
        throw std::invalid_argument("matrix data does not match its order");
    SymMatrix a(order);
    for (std::size_t i = 0; i < order; ++i) {
        for (std::size_t j = i; j < order; ++j) {
            const double upper = values[i * order + j];
            const double lower = values[j * order + i];
            if (std::abs(upper - lower) > tol)
                throw std::invalid_argument(fmt::format("matrix is not symmetric at ({}, {})", i, j));
            a.set(i, j, upper);
        }
    }
    return a;
}

std::vector<double> SymMatrix::diag() const
{
    std::vector<double> d(order_);
    for (std::size_t i = 0; i < order_; ++i)
        d[i] = data_[i * order_ + i];
    return d;
}

double SymMatrix::frobenius_norm() const { return std::sqrt(kernels::dot(data_, data_)); }

void SymMatrix::require_same_order(const SymMatrix& other) const
{
    if (order_ != other.order_)
        throw std::invalid_argument(fmt::format("matrix order mismatch: {} vs {}", order_, other.order_));
}

SymMatrix& SymMatrix::operator+=(const SymMatrix& other)
{
    require_same_order(other);
    for (std::size_t k = 0; k < data_.size(); ++k)
        data_[k] += other.data_[k];
    return *this;
}

SymMatrix& SymMatrix::operator-=(const SymMatrix& other)
{
    require_same_order(other);
    for (std::size_t k = 0; k < data_.size(); ++k)
        data_[k] -= other.data_[k];
    return *this;
}

SymMatrix& SymMatrix::operator*=(double s)
{
    for (double& v : data_)
        v *= s;
    return *this;
}

SymMatrix& SymMatrix::add_identity(double s)
{
    for (std::size_t i = 0; i < order_; ++i)
        data_[i * order_ + i] += s;
    return *this;
}

double SymMatrix::quadratic_form(std::span<const double> v) const
{
    if (v.size() != order_)
        throw std::invalid_argument("vector length does not match matrix order");
    double acc = 0.0;
    for (std::size_t i = 0; i < order_; ++i)
        acc += v[i] * kernels::dot(row(i), v);
    return acc;
}

void write_csv(std::ostream& out, const SymMatrix& a)
{
    for (std::size_t i = 0; i < a.order(); ++i) {
        for (std::size_t j = 0; j < a.order(); ++j) {
            if (j > 0)
                out << ',';
            out << fmt::format("{}", a(i, j));
        }
        out << '\n';
    }
}

SymMatrix read_csv(std::istream& in)
{
    std::vector<double> values;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty() || line.front() == '#')
            continue;
        std::size_t count = 0;
        std::stringstream cells(line);
        std::string cell;
        while (std::getline(cells, cell, ',')) {
            const auto first = cell.find_first_not_of(" \t");
            const auto last = cell.find_last_not_of(" \t");
            if (first == std::string::npos)
                throw std::invalid_argument("empty CSV cell");
            double v = 0.0;
            const char* begin = cell.data() + first;
            const char* end = cell.data() + last + 1;
            const auto [ptr, ec] = std::from_chars(begin, end, v);
            if (ec != std::errc() || ptr != end)
                throw std::invalid_argument("bad number in CSV: " + cell);
            values.push_back(v);
            ++count;
        }
        if (rows == 0)
            cols = count;
        else if (count != cols)
            throw std::invalid_argument("ragged CSV matrix");
        ++rows;
    }
    if (rows != cols)
        throw std::invalid_argument(fmt::format("CSV matrix is {}x{}, expected square", rows, cols));
    return SymMatrix::from_row_major(rows, values);
}

void save_csv(const std::string& path, const SymMatrix& a)
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write " + path);
    write_csv(out, a);
}

SymMatrix load_csv(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot read " + path);
    return read_csv(in);
}

}  // namespace convexeit
