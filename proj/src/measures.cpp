#include "bernwf/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "bernwf/binom.hpp"

namespace bernwf {

namespace {

constexpr double kMinWeight = 1e-15;

void check_support(double r, Support support) {
    bool ok = false;
    switch (support) {
        case Support::unit_half_open:
            ok = r > 0.0 && r <= 1.0;
            break;
        case Support::signed_open:
            ok = r > -1.0 && r < 1.0 && r != 0.0;
            break;
    }
    if (!ok || !std::isfinite(r)) {
        std::ostringstream os;
        os << "atom location " << r << " outside allowed support "
           << (support == Support::unit_half_open ? "(0,1]" : "(-1,1) \\ {0}");
        throw std::invalid_argument(os.str());
    }
}

}  // namespace

AtomicMeasure::AtomicMeasure(std::vector<Atom> atoms, Support support) {
    for (const Atom& a : atoms) {
        check_support(a.location, support);
        if (!std::isfinite(a.weight) || a.weight <= 0.0) {
            std::ostringstream os;
            os << "atom weight " << a.weight << " at location " << a.location
               << " must be strictly positive";
            throw std::invalid_argument(os.str());
        }
    }
    std::sort(atoms.begin(), atoms.end(),
              [](const Atom& x, const Atom& y) { return x.location < y.location; });
    for (const Atom& a : atoms) {
        if (!atoms_.empty() && atoms_.back().location == a.location) {
            atoms_.back().weight += a.weight;
        } else {
            atoms_.push_back(a);
        }
    }
    for (const Atom& a : atoms_) {
        if (a.weight < kMinWeight) {
            std::ostringstream os;
            os << "atom weight " << a.weight << " at location " << a.location << " below "
               << kMinWeight;
            throw std::invalid_argument(os.str());
        }
    }
}

double AtomicMeasure::mass() const {
    double m = 0.0;
    for (const Atom& a : atoms_) m += a.weight;
    return m;
}

void ModelParams::validate() const {
    if (!(lambda0 >= 0.0) || !std::isfinite(lambda0))
        throw std::invalid_argument("lambda0 must be a nonnegative real");
    if (!(theta_a >= 0.0) || !(theta_A >= 0.0))
        throw std::invalid_argument("theta_a and theta_A must be nonnegative");
    auto bad = sel.validate();
    if (!bad.empty()) {
        std::string msg = "invalid selection kernel:";
        for (const auto& b : bad) msg += " " + b + ";";
        throw std::invalid_argument(msg);
    }
}

double lambda_rate(const ModelParams& p, int n, int ell) {
    if (n < 2 || ell < 2 || ell > n) throw std::invalid_argument("lambda_rate requires 2 <= ell <= n");
    double rate = (ell == 2) ? p.lambda0 : 0.0;
    for (const Atom& a : p.lambda_tail.atoms()) {
        rate += a.weight * pow_conv(a.location, ell - 2) * pow_conv(1.0 - a.location, n - ell);
    }
    return rate;
}

namespace {

double signed_group_rate(const AtomicMeasure& m, int n, int ell, Allele c) {
    if (n < 1 || ell < 1 || ell > n) throw std::invalid_argument("group rate requires 1 <= ell <= n");
    double rate = 0.0;
    for (const Atom& a : m.atoms()) {
        bool matches = (c == Allele::a) ? a.location > 0.0 : a.location < 0.0;
        if (!matches) continue;
        double r = std::abs(a.location);
        rate += a.weight * pow_conv(r, ell - 1) * pow_conv(1.0 - r, n - ell);
    }
    return rate;
}

}  // namespace

double mut_rate(const ModelParams& p, int n, int ell, Allele c) {
    return signed_group_rate(p.nu, n, ell, c);
}

double env_rate(const ModelParams& p, int n, int ell, Allele c) {
    return signed_group_rate(p.mu, n, ell, c);
}

double b_beta(const ModelParams& p) { return p.sel.branch_intensity(); }

double c_lambda(const ModelParams& p) {
    if (p.lambda0 > 0.0) return std::numeric_limits<double>::infinity();
    double c = 0.0;
    for (const Atom& a : p.lambda_tail.atoms()) {
        if (a.location == 1.0) return std::numeric_limits<double>::infinity();
        c += a.weight * std::abs(std::log1p(-a.location)) / (a.location * a.location);
    }
    return c;
}

AssumptionReport check_assumption(const ModelParams& p) {
    AssumptionReport rep;
    rep.branch_intensity = b_beta(p);
    rep.coalescence_strength = c_lambda(p);
    rep.mu_mass = p.mu.mass();
    rep.nu_mass = p.nu.mass();
    rep.theta = p.theta();
    rep.holds = rep.branch_intensity + rep.mu_mass <
                rep.coalescence_strength + rep.nu_mass + rep.theta;
    return rep;
}

namespace {

// sum_{k>=1} C(n,k) |r|^k (1-|r|)^{n-k} / |r| = (1 - (1-|r|)^n) / |r|
double one_sided_total(const AtomicMeasure& m, int n) {
    double total = 0.0;
    for (const Atom& a : m.atoms()) {
        double r = std::abs(a.location);
        total += a.weight * (1.0 - pow_conv(1.0 - r, n)) / r;
    }
    return total;
}

}  // namespace

double total_dual_rate(const ModelParams& p, int n) {
    if (n < 0) throw std::invalid_argument("total_dual_rate requires n >= 0");
    if (n == 0) return 0.0;
    double total = 0.0;
    if (n >= 2) {
        total += binom(n, 2) * p.lambda0;
        for (const Atom& a : p.lambda_tail.atoms()) {
            double r = a.location;
            total += a.weight *
                     (1.0 - pow_conv(1.0 - r, n) - n * r * pow_conv(1.0 - r, n - 1)) / (r * r);
        }
    }
    total += n * p.sel.beta_total();
    total += one_sided_total(p.mu, n);
    total += one_sided_total(p.nu, n);
    total += n * p.theta();
    return total;
}

double rate_bound_constant(const ModelParams& p) {
    double lambda_below_one = p.lambda0;
    for (const Atom& a : p.lambda_tail.atoms())
        if (a.location < 1.0) lambda_below_one += a.weight;
    return lambda_below_one + p.mu.mass() + p.nu.mass() + p.theta() + p.sel.beta_total();
}

}  // namespace bernwf
