#include "mehler/levy_measure.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace mehler {

bool TailClass::admits(double q, double s) const {
    switch (kind) {
        case TailKind::compact:
        case TailKind::gaussian:
            return true;
        case TailKind::exponential:
            return s < parameter;
        case TailKind::power:
            return s == 0.0 && q < parameter;
    }
    return false;
}

std::string TailClass::describe() const {
    std::ostringstream os;
    switch (kind) {
        case TailKind::gaussian: os << "gaussian"; break;
        case TailKind::exponential: os << "exponential(" << parameter << ")"; break;
        case TailKind::power: os << "power(" << parameter << ")"; break;
        case TailKind::compact: os << "compact(" << parameter << ")"; break;
    }
    return os.str();
}

struct LevyMeasure::Impl {
    int d = 1;
    double order = 0.0;
    TailClass tail;
    std::vector<Ray> rays;
    std::optional<Density> density;
    std::vector<SphereAtom> atoms;
    RadialKernel radial;
    bool zero = false;
};

namespace {

void check_order(double order) {
    if (!(order >= 0.0 && order < 2.0))
        throw DomainError("singularity order must lie in [0,2), got " + std::to_string(order));
}

}  // namespace

LevyMeasure LevyMeasure::from_density(int d, Density density, double singularity_order,
                                      TailClass tail, int angular_resolution) {
    check_order(singularity_order);
    if (d < 1) throw DomainError("dimension must be positive");
    auto impl = std::make_shared<Impl>();
    impl->d = d;
    impl->order = singularity_order;
    impl->tail = tail;
    impl->density = density;
    if (d == 1) {
        for (double sgn : {1.0, -1.0}) {
            Vector dir(1);
            dir(0) = sgn;
            impl->rays.push_back({dir, [density, sgn](double r) {
                                      const double y = sgn * r;
                                      return density(std::span<const double>(&y, 1));
                                  }});
        }
    } else if (d == 2) {
        if (angular_resolution < 4 || angular_resolution % 2)
            throw DomainError("angular resolution must be even and at least 4");
        const int n = angular_resolution;
        const double w = 2.0 * std::numbers::pi / n;
        for (int j = 0; j < n; ++j) {
            const double phi = w * (j + 0.5);
            Vector dir(2);
            dir << std::cos(phi), std::sin(phi);
            const double c = dir(0), s = dir(1);
            impl->rays.push_back({dir,
                                  [density, c, s, w](double r) {
                                      const double y[2] = {r * c, r * s};
                                      return w * r * density(std::span<const double>(y, 2));
                                  },
                                  0.5 * w});
        }
    } else {
        throw DomainError("densities are supported in dimension 1 and 2; use sphere atoms for d = " +
                          std::to_string(d));
    }
    return LevyMeasure(impl);
}

LevyMeasure LevyMeasure::spherical(std::vector<SphereAtom> atoms, RadialKernel radial,
                                   double singularity_order, TailClass tail) {
    check_order(singularity_order);
    if (atoms.empty()) throw DomainError("spherical measure needs at least one atom");
    auto impl = std::make_shared<Impl>();
    impl->d = static_cast<int>(atoms.front().direction.size());
    impl->order = singularity_order;
    impl->tail = tail;
    impl->radial = radial;
    for (auto& a : atoms) {
        if (a.direction.size() != impl->d) throw DomainError("atoms of mixed dimension");
        const double n = a.direction.norm();
        if (std::abs(n - 1.0) > 1e-12) throw DomainError("sphere atom is not a unit vector");
        if (a.weight < 0.0) throw DomainError("negative atom weight");
        const double w = a.weight;
        impl->rays.push_back({a.direction, [radial, w](double r) { return w * radial(r); }});
    }
    impl->atoms = std::move(atoms);
    return LevyMeasure(impl);
}

LevyMeasure LevyMeasure::from_rays(int d, std::vector<Ray> rays, double singularity_order,
                                   TailClass tail, std::optional<Density> density) {
    check_order(singularity_order);
    auto impl = std::make_shared<Impl>();
    impl->d = d;
    impl->order = singularity_order;
    impl->tail = tail;
    impl->rays = std::move(rays);
    impl->density = std::move(density);
    for (const auto& r : impl->rays)
        if (r.direction.size() != d) throw DomainError("ray direction has wrong dimension");
    return LevyMeasure(impl);
}

LevyMeasure LevyMeasure::zero(int d) {
    auto impl = std::make_shared<Impl>();
    impl->d = d;
    impl->tail = TailClass::compact(0.0);
    impl->zero = true;
    impl->density = [](std::span<const double>) { return 0.0; };
    return LevyMeasure(impl);
}

int LevyMeasure::dimension() const { return impl_->d; }
double LevyMeasure::singularity_order() const { return impl_->order; }
const TailClass& LevyMeasure::tail() const { return impl_->tail; }
const std::vector<Ray>& LevyMeasure::rays() const { return impl_->rays; }
bool LevyMeasure::is_zero() const { return impl_->zero; }
bool LevyMeasure::has_density() const { return impl_->density.has_value(); }

double LevyMeasure::density(std::span<const double> y) const {
    if (!impl_->density) throw DomainError("measure has no density (spherical atoms)");
    return (*impl_->density)(y);
}

const std::vector<SphereAtom>& LevyMeasure::spherical_atoms() const { return impl_->atoms; }
const RadialKernel& LevyMeasure::radial_profile() const { return impl_->radial; }

LevyMeasure LevyMeasure::scaled(double factor) const {
    if (factor < 0.0) throw DomainError("negative scale factor");
    if (factor == 0.0) return zero(impl_->d);
    auto impl = std::make_shared<Impl>(*impl_);
    for (auto& r : impl->rays) {
        auto k = r.kernel;
        r.kernel = [k, factor](double x) { return factor * k(x); };
    }
    if (impl->density) {
        auto m = *impl->density;
        impl->density = [m, factor](std::span<const double> y) { return factor * m(y); };
    }
    if (impl->radial) {
        auto k = impl->radial;
        impl->radial = [k, factor](double x) { return factor * k(x); };
    }
    return LevyMeasure(impl);
}

bool LevyMeasure::is_symmetric(double rel_tol) const {
    const auto& rs = impl_->rays;
    std::vector<bool> used(rs.size(), false);
    for (std::size_t i = 0; i < rs.size(); ++i) {
        if (used[i]) continue;
        bool found = false;
        for (std::size_t j = 0; j < rs.size() && !found; ++j) {
            if (j == i || used[j]) continue;
            if ((rs[i].direction + rs[j].direction).norm() > 1e-10) continue;
            bool same = true;
            for (double lr = -4.0; lr <= 2.0 && same; lr += 0.25) {
                const double r = std::pow(10.0, lr);
                const double a = rs[i].kernel(r), b = rs[j].kernel(r);
                same = std::abs(a - b) <= rel_tol * std::max(std::abs(a), std::abs(b));
            }
            if (same) {
                used[i] = used[j] = true;
                found = true;
            }
        }
        if (!found) return false;
    }
    return true;
}

quad::Outcome radial_moment(const LevyMeasure& M, double p, double lo, double hi,
                            const quad::Tolerance& tol) {
    quad::Outcome total{};
    RadialOptions opt;
    opt.power_at_zero = p;
    opt.growth = p;
    opt.tol = tol;
    for (const auto& ray : M.rays())
        total += integrate_ray(M, ray, [p](double r) { return std::pow(r, p); }, lo, hi, opt);
    return total;
}

}  // namespace mehler
