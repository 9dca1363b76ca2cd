#include "bernwf/selection.hpp"

#include <cmath>
#include <sstream>

#include "bernwf/binom.hpp"

namespace bernwf {

SelectionKernel SelectionKernel::neutral() {
    SelectionKernel k;
    k.kappa = 2;
    k.beta = {0.0};
    k.p = {{0.0, 0.5, 1.0}};
    return k;
}

double SelectionKernel::beta_total() const {
    double s = 0.0;
    for (double b : beta) s += b;
    return s;
}

double SelectionKernel::branch_intensity() const {
    double s = 0.0;
    for (int ell = 2; ell <= kappa; ++ell) s += beta_at(ell) * (ell - 1);
    return s;
}

double SelectionKernel::d_poly(double x) const {
    double total = 0.0;
    for (int ell = 2; ell <= kappa; ++ell) {
        double b = beta_at(ell);
        if (b == 0.0) continue;
        double inner = 0.0;
        for (int i = 0; i <= ell; ++i) {
            double basis = binom(ell, i) * pow_conv(x, i) * pow_conv(1.0 - x, ell - i);
            inner += basis * (p_at(ell, i) - static_cast<double>(i) / ell);
        }
        total += b * inner;
    }
    return total;
}

std::vector<std::string> SelectionKernel::validate() const {
    std::vector<std::string> bad;
    auto complain = [&bad](const std::string& msg) { bad.push_back(msg); };
    if (kappa < 2) complain("kappa must be at least 2");
    if (static_cast<int>(beta.size()) != kappa - 1)
        complain("beta must have kappa - 1 entries (ell = 2..kappa)");
    if (static_cast<int>(p.size()) != kappa - 1)
        complain("p must have one row per ell = 2..kappa");
    for (int j = 0; j < static_cast<int>(beta.size()); ++j) {
        if (!(beta[static_cast<std::size_t>(j)] >= 0.0)) {
            std::ostringstream os;
            os << "beta nonnegative violated at ell=" << j + 2;
            complain(os.str());
        }
    }
    for (int j = 0; j < static_cast<int>(p.size()); ++j) {
        int ell = j + 2;
        const auto& row = p[static_cast<std::size_t>(j)];
        if (static_cast<int>(row.size()) != ell + 1) {
            std::ostringstream os;
            os << "p row for ell=" << ell << " must have " << ell + 1 << " entries";
            complain(os.str());
            continue;
        }
        for (int i = 0; i <= ell; ++i) {
            double v = row[static_cast<std::size_t>(i)];
            if (!(v >= 0.0 && v <= 1.0)) {
                std::ostringstream os;
                os << "p_" << i << "^(" << ell << ") must lie in [0,1]";
                complain(os.str());
            }
        }
        if (row.front() != 0.0) {
            std::ostringstream os;
            os << "p_0 must be 0 (ell=" << ell << ")";
            complain(os.str());
        }
        if (row.back() != 1.0) {
            std::ostringstream os;
            os << "p_ell must be 1 (ell=" << ell << ")";
            complain(os.str());
        }
    }
    return bad;
}

}  // namespace bernwf
