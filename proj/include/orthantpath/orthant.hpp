#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "orthantpath/errors.hpp"

namespace orthantpath {

// Sign vector in {-1,0,+1}^p identifying an orthant; the diagonal of the
// orthant matrix C. Immutable after construction.
class OrthantSign {
public:
    OrthantSign() = default;
    explicit OrthantSign(std::vector<int> signs);
    static OrthantSign zeros(Eigen::Index p);

    // Sign pattern of a vector; entries within tol of zero map to 0.
    static OrthantSign sign_of(const Eigen::VectorXd& v, double tol);

    // Orthant with index k under mixed-radix counting over {-1,0,+1}^p,
    // least-significant coordinate first, digit order -1 < 0 < +1.
    static OrthantSign from_index(std::uint64_t k, Eigen::Index p);

    Eigen::Index size() const { return static_cast<Eigen::Index>(signs_.size()); }
    int operator[](Eigen::Index i) const { return signs_[static_cast<std::size_t>(i)]; }
    Eigen::Index nonzero_count() const;
    bool all_zero() const { return nonzero_count() == 0; }

    // Copy with coordinate j set to sign k.
    OrthantSign with(Eigen::Index j, int k) const;

    std::vector<Eigen::Index> active() const;

    // +/0/- notation, e.g. "-+-".
    std::string str() const;

    std::uint64_t index() const;

    bool operator==(const OrthantSign& o) const { return signs_ == o.signs_; }

private:
    std::vector<int> signs_;
};

Eigen::VectorXd apply_sign(const OrthantSign& c, const Eigen::VectorXd& v);

}  // namespace orthantpath
