#include "convexeit/layer_box.hpp"

#include <cmath>
#include <stdexcept>

namespace convexeit {

SigmaBox::SigmaBox(std::vector<double> lower, std::vector<double> upper) : lower_(std::move(lower)), upper_(std::move(upper))
{
    if (lower_.size() != upper_.size() || lower_.empty())
        throw std::invalid_argument("box bounds must be non-empty and of equal length");
    for (std::size_t i = 0; i < lower_.size(); ++i) {
        if (!(lower_[i] > 0.0) || !std::isfinite(upper_[i]) || lower_[i] > upper_[i])
            throw std::invalid_argument("box bounds must satisfy 0 < lower <= upper < inf");
        if (lower_[i] != upper_[i])
            free_.push_back(i);
    }
}

SigmaBox SigmaBox::uniform(std::size_t layers, double lower, double upper)
{
    return SigmaBox(std::vector<double>(layers, lower), std::vector<double>(layers, upper));
}

std::vector<double> SigmaBox::expand(std::span<const double> free) const
{
    if (free.size() != free_.size())
        throw std::invalid_argument("free coordinate vector has the wrong length");
    std::vector<double> full = lower_;
    for (std::size_t k = 0; k < free_.size(); ++k)
        full[free_[k]] = free[k];
    return full;
}

std::vector<double> SigmaBox::restrict(std::span<const double> full) const
{
    if (full.size() != lower_.size())
        throw std::invalid_argument("conductivity vector does not match the box");
    std::vector<double> out;
    out.reserve(free_.size());
    for (std::size_t i : free_)
        out.push_back(full[i]);
    return out;
}

bool SigmaBox::contains(std::span<const double> full, double tol) const
{
    if (full.size() != lower_.size())
        return false;
    for (std::size_t i = 0; i < full.size(); ++i)
        if (full[i] < lower_[i] - tol || full[i] > upper_[i] + tol)
            return false;
    return true;
}

}  // namespace convexeit
