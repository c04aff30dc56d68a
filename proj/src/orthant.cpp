#include "orthantpath/orthant.hpp"

#include <cmath>
#include <utility>

namespace orthantpath {

OrthantSign::OrthantSign(std::vector<int> signs) : signs_(std::move(signs)) {
    for (int s : signs_) {
        if (s != -1 && s != 0 && s != 1) {
            throw DimensionMismatch("orthant sign entries must be -1, 0, or +1");
        }
    }
}

OrthantSign OrthantSign::zeros(Eigen::Index p) {
    return OrthantSign(std::vector<int>(static_cast<std::size_t>(p), 0));
}

OrthantSign OrthantSign::sign_of(const Eigen::VectorXd& v, double tol) {
    std::vector<int> s(static_cast<std::size_t>(v.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::abs(v[i]) <= tol) {
            s[static_cast<std::size_t>(i)] = 0;
        } else {
            s[static_cast<std::size_t>(i)] = v[i] > 0 ? 1 : -1;
        }
    }
    return OrthantSign(std::move(s));
}

OrthantSign OrthantSign::from_index(std::uint64_t k, Eigen::Index p) {
    std::vector<int> s(static_cast<std::size_t>(p));
    for (Eigen::Index i = 0; i < p; ++i) {
        s[static_cast<std::size_t>(i)] = static_cast<int>(k % 3) - 1;
        k /= 3;
    }
    return OrthantSign(std::move(s));
}

Eigen::Index OrthantSign::nonzero_count() const {
    Eigen::Index n = 0;
    for (int s : signs_) n += (s != 0);
    return n;
}

OrthantSign OrthantSign::with(Eigen::Index j, int k) const {
    std::vector<int> s = signs_;
    s.at(static_cast<std::size_t>(j)) = k;
    return OrthantSign(std::move(s));
}

std::vector<Eigen::Index> OrthantSign::active() const {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index i = 0; i < size(); ++i) {
        if ((*this)[i] != 0) idx.push_back(i);
    }
    return idx;
}

std::string OrthantSign::str() const {
    std::string out;
    out.reserve(signs_.size());
    for (int s : signs_) out.push_back(s == 0 ? '0' : (s > 0 ? '+' : '-'));
    return out;
}

std::uint64_t OrthantSign::index() const {
    std::uint64_t k = 0;
    for (std::size_t i = signs_.size(); i-- > 0;) {
        k = k * 3 + static_cast<std::uint64_t>(signs_[i] + 1);
    }
    return k;
}

Eigen::VectorXd apply_sign(const OrthantSign& c, const Eigen::VectorXd& v) {
    if (c.size() != v.size()) {
        throw DimensionMismatch("apply_sign: sign vector and input lengths differ");
    }
    Eigen::VectorXd out(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) out[i] = c[i] * v[i];
    return out;
}

}  // namespace orthantpath
