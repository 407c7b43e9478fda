#include "mehler/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <thread>

#include <boost/math/quadrature/gauss.hpp>

#include "mehler/errors.hpp"

namespace mehler {

namespace {

// tolerances for table building; tables are interpolated anyway
const quad::Tolerance kTableTol{1e-10, 1e-15, 20};

double survival_from(const LevyMeasure& M, const Ray& ray, double r) {
    RadialOptions o;
    o.tol = kTableTol;
    return integrate_ray(M, ray, [](double) { return 1.0; }, r, kInf, o).value;
}

// direction statistics of a ray whose samples are spread uniformly over an
// angular cell of half width hw (2D grids only)
Vector mean_direction(const Ray& ray) {
    const double hw = ray.angular_halfwidth;
    if (hw == 0.0) return ray.direction;
    return ray.direction * (std::sin(hw) / hw);
}

Matrix direction_second_moment(const Ray& ray) {
    const Vector& th = ray.direction;
    const double hw = ray.angular_halfwidth;
    if (hw == 0.0) return th * th.transpose();
    const double phi = std::atan2(th(1), th(0));
    const double k = 0.5 * std::sin(2.0 * hw) / (2.0 * hw);
    Matrix out(2, 2);
    out << 0.5 + k * std::cos(2 * phi), k * std::sin(2 * phi), k * std::sin(2 * phi), 0.5 - k * std::cos(2 * phi);
    return out;
}

}  // namespace

JumpSampler::JumpSampler(const LevyMeasure& M, const JumpScheme& scheme)
    : d_(M.dimension()), scheme_(scheme), comp_(Vector::Zero(M.dimension())),
      small_cov_(Matrix::Zero(M.dimension(), M.dimension())),
      small_sqrt_(Matrix::Zero(M.dimension(), M.dimension())) {
    const double eps = scheme.epsilon;
    if (!(eps > 0.0 && eps < 1.0)) throw DomainError("small-jump cutoff must lie in (0, 1)");
    if (scheme.table_points < 16) throw DomainError("inverse tables need at least 16 points");
    if (M.is_zero()) return;
    for (const auto& ray : M.rays())
        if (ray.angular_halfwidth > 0.0 && d_ != 2) throw DomainError("angular jitter is only defined in 2D");

    const TailClass& tail = M.tail();
    RadialOptions o;
    o.tol = kTableTol;
    using GL = boost::math::quadrature::gauss<double, 3>;
    for (const auto& ray : M.rays()) {
        Table tab;
        tab.total = survival_from(M, ray, eps);

        // small-jump statistics and compensator of this ray
        o.power_at_zero = 2.0;
        const double second = integrate_ray(M, ray, [](double r) { return r * r; }, 0.0, eps, o).value;
        small_cov_ += second * direction_second_moment(ray);
        o.power_at_zero = 1.0;
        const double first = integrate_ray(M, ray, [](double r) { return r; }, eps, 1.0, o).value;
        comp_ += first * mean_direction(ray);

        if (tab.total > 0.0) {
            double hi;
            double top = 0.0;
            if (tail.kind == TailKind::compact) {
                hi = std::max(tail.parameter, eps * 1.0001);
            } else if (tail.kind == TailKind::power) {
                hi = 1e4;
                tab.tail_exponent = tail.parameter;
                top = survival_from(M, ray, hi);
            } else {
                hi = 2.0;
                while ((top = survival_from(M, ray, hi)) > 1e-14 * tab.total && hi < 1e6) hi *= 2.0;
            }
            // survival on a fine log-r grid, then resampled uniformly in log S
            const int n = scheme.table_points;
            const int fine = 2 * n;
            std::vector<double> lr(fine), ls(fine), S(fine);
            const double la = std::log(eps), lb = std::log(hi);
            for (int i = 0; i < fine; ++i) lr[i] = la + (lb - la) * i / (fine - 1);
            lr.back() = lb;
            S[fine - 1] = top;
            for (int i = fine - 2; i >= 0; --i) {
                const double a = std::exp(lr[i]), b = std::exp(lr[i + 1]);
                S[i] = S[i + 1] + GL::integrate([&](double r) { return ray.kernel(r); }, a, b);
            }
            for (int i = 0; i < fine; ++i) ls[i] = -std::log(std::max(S[i] / S[0], 1e-300));  // increasing
            const double depth = ls.back();
            tab.step = depth / (n - 1);
            tab.radius.resize(n);
            std::size_t j = 0;
            for (int i = 0; i < n; ++i) {
                const double target = i == n - 1 ? depth : i * tab.step;
                while (j + 1 < static_cast<std::size_t>(fine) && ls[j + 1] < target) ++j;
                if (j + 1 >= static_cast<std::size_t>(fine)) {
                    tab.radius[i] = hi;
                    continue;
                }
                const double span = ls[j + 1] - ls[j];
                const double w = span > 0.0 ? std::clamp((target - ls[j]) / span, 0.0, 1.0) : 0.0;
                tab.radius[i] = std::exp(lr[j] + w * (lr[j + 1] - lr[j]));
            }
            if (top <= 0.0) tab.tail_exponent = 0.0;
        }
        rate_ += tab.total;
        cumulative_.push_back(rate_);
        rays_.push_back(ray);
        tables_.push_back(std::move(tab));
    }
    if (scheme.policy == SmallJumpPolicy::gaussian_substitute) small_sqrt_ = sqrt_psd(small_cov_);
}

double JumpSampler::draw_radius(int k, RandomStream& rng) const { return radius_at(k, rng.uniform()); }

double JumpSampler::radius_at(int k, double u) const {
    const Table& t = tables_[static_cast<std::size_t>(k)];
    const double x = -std::log(u) / t.step;  // -log S in table steps
    const std::size_t n = t.radius.size();
    if (x >= static_cast<double>(n - 1)) {
        if (t.tail_exponent > 0.0) return t.radius.back() * std::exp((x - (n - 1)) * t.step / t.tail_exponent);
        return t.radius.back();
    }
    const std::size_t i = static_cast<std::size_t>(x);
    const double w = x - static_cast<double>(i);
    return t.radius[i] + w * (t.radius[i + 1] - t.radius[i]);
}

void JumpSampler::add_jump(double* out, double scale, RandomStream& rng) const {
    std::size_t k = 0;
    double u = rng.uniform();
    if (rays_.size() > 1) {
        // pick the ray, then reuse the position inside its slot as the radius uniform
        const double v = u * rate_;
        k = static_cast<std::size_t>(std::upper_bound(cumulative_.begin(), cumulative_.end(), v) -
                                     cumulative_.begin());
        k = std::min(k, rays_.size() - 1);
        while (tables_[k].total == 0.0 && k > 0) --k;
        const double lo = k == 0 ? 0.0 : cumulative_[k - 1];
        u = std::clamp((v - lo) / tables_[k].total, 0x1.0p-54, 1.0 - 0x1.0p-54);
    }
    const Ray& ray = rays_[k];
    const double r = scale * radius_at(static_cast<int>(k), u);
    if (ray.angular_halfwidth == 0.0) {
        for (int i = 0; i < d_; ++i) out[i] += r * ray.direction(i);
        return;
    }
    const double a = (2.0 * rng.uniform() - 1.0) * ray.angular_halfwidth;
    const double c = std::cos(a), s = std::sin(a);
    out[0] += r * (c * ray.direction(0) - s * ray.direction(1));
    out[1] += r * (s * ray.direction(0) + c * ray.direction(1));
}

Vector JumpSampler::draw_jump(RandomStream& rng) const {
    Vector out = Vector::Zero(d_);
    add_jump(out.data(), 1.0, rng);
    return out;
}

Vector JumpSampler::increment(double dt, RandomStream& rng) const {
    Vector out = -dt * comp_;
    if (rate_ > 0.0) {
        const std::uint64_t n = rng.poisson(dt * rate_);
        for (std::uint64_t i = 0; i < n; ++i) add_jump(out.data(), 1.0, rng);
    }
    if (scheme_.policy == SmallJumpPolicy::gaussian_substitute && !small_sqrt_.isZero(0.0)) {
        Vector z(d_);
        for (int i = 0; i < d_; ++i) z(i) = rng.normal();
        out += std::sqrt(dt) * (small_sqrt_ * z);
    }
    return out;
}

IdSampler::IdSampler(const LevyTriple& triple, const JumpScheme& scheme)
    : b_(triple.b), q_sqrt_(sqrt_psd(triple.Q)), jumps_(triple.M, scheme) {}

Vector IdSampler::draw(RandomStream& rng) const { return increment(1.0, rng); }

Vector IdSampler::increment(double dt, RandomStream& rng) const {
    Vector out = dt * b_ + jumps_.increment(dt, rng);
    if (!q_sqrt_.isZero(0.0)) {
        Vector z(b_.size());
        for (int i = 0; i < z.size(); ++i) z(i) = rng.normal();
        out += std::sqrt(dt) * (q_sqrt_ * z);
    }
    return out;
}

SampleSet fill_blocks(int N, int d, std::uint64_t seed, int chains,
                      const std::function<void(RandomStream&, Eigen::Ref<Matrix>)>& block) {
    if (N < 0) throw DomainError("sample count must be nonnegative");
    SampleSet out = SampleSet::Zero(N, d);
    const int nblocks = (N + kBlockSize - 1) / kBlockSize;
    const RandomStream root(seed);
    auto run = [&](int first, int stride) {
        for (int k = first; k < nblocks; k += stride) {
            RandomStream rng = root.substream(static_cast<std::uint64_t>(k));
            const int begin = k * kBlockSize, len = std::min(kBlockSize, N - begin);
            block(rng, out.middleRows(begin, len));
        }
    };
    const int workers = std::max(1, std::min(chains, nblocks));
    if (workers == 1) {
        run(0, 1);
        return out;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            try {
                run(w, workers);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

Vector sample_levy_increment(const LevyMeasure& M, double dt, const JumpScheme& scheme, RandomStream& rng) {
    if (!(dt > 0.0)) throw DomainError("time step must be positive");
    return JumpSampler(M, scheme).increment(dt, rng);
}

// ---- OU paths

OuSimulator::OuSimulator(const LevyTriple& triple, const SemigroupFamily& sg, double T, const JumpScheme& scheme)
    : sg_(sg), T_(T), jumps_(triple.M, scheme) {
    if (!(T > 0.0)) throw DomainError("horizon must be positive");
    const int d = triple.dimension();
    const Matrix& B = sg.generator();
    TT_ = sg.T(T);
    // int_0^T e^{uB} v du from the augmented exponential
    const Vector v = triple.b - jumps_.compensator();
    Matrix aug = Matrix::Zero(d + 1, d + 1);
    aug.topLeftCorner(d, d) = B * T;
    aug.topRightCorner(d, 1) = v * T;
    drift_ = expm(aug).topRightCorner(d, 1);
    // Van Loan: int_0^T e^{uB} G e^{uB*} du
    Matrix G = triple.Q;
    if (scheme.policy == SmallJumpPolicy::gaussian_substitute) G += jumps_.small_jump_covariance();
    if (G.isZero(0.0)) {
        noise_sqrt_ = Matrix::Zero(d, d);
    } else {
        Matrix vl = Matrix::Zero(2 * d, 2 * d);
        vl.topLeftCorner(d, d) = -B * T;
        vl.topRightCorner(d, d) = G * T;
        vl.bottomRightCorner(d, d) = B.transpose() * T;
        const Matrix E = expm(vl);
        Matrix cov = E.bottomRightCorner(d, d).transpose() * E.topRightCorner(d, d);
        cov = 0.5 * (cov + cov.transpose()).eval();
        noise_sqrt_ = sqrt_psd(cov);
    }
}

Vector OuSimulator::simulate(const Vector& x0, RandomStream& rng) const {
    const int d = static_cast<int>(x0.size());
    Vector z = TT_ * x0 + drift_;
    if (jumps_.rate() > 0.0) {
        const std::uint64_t n = rng.poisson(T_ * jumps_.rate());
        const bool scalar = sg_.is_scalar();
        const double rate = scalar ? sg_.scalar_rate() : 0.0;
        for (std::uint64_t i = 0; i < n; ++i) {
            const double lag = T_ * rng.uniform();  // T - s for a uniform jump time s
            if (scalar) {
                jumps_.add_jump(z.data(), std::exp(rate * lag), rng);
            } else {
                z += sg_.T(lag) * jumps_.draw_jump(rng);
            }
        }
    }
    if (!noise_sqrt_.isZero(0.0)) {
        Vector g(d);
        for (int i = 0; i < d; ++i) g(i) = rng.normal();
        z += noise_sqrt_ * g;
    }
    return z;
}

Vector simulate_ou_path(const Vector& x0, double T, const LevyTriple& triple, const SemigroupFamily& sg,
                        const JumpScheme& scheme, RandomStream& rng) {
    return OuSimulator(triple, sg, T, scheme).simulate(x0, rng);
}

// ---- laws

namespace {

SampleSet sample_id(const LevyTriple& triple, int N, const JumpScheme& scheme, std::uint64_t seed, int chains) {
    const IdSampler sampler(triple, scheme);
    return fill_blocks(N, triple.dimension(), seed, chains, [&](RandomStream& rng, Eigen::Ref<Matrix> rows) {
        for (Eigen::Index i = 0; i < rows.rows(); ++i) rows.row(i) = sampler.draw(rng).transpose();
    });
}

}  // namespace

SampleSet sample_mu_t(double t, int N, const EvolvedTriple& ev, const JumpScheme& scheme, std::uint64_t seed,
                      int chains) {
    if (!(t >= 0.0)) throw DomainError("time must be nonnegative");
    if (t == 0.0) return SampleSet::Zero(std::max(N, 0), ev.dimension());
    if (std::isinf(t)) return sample_invariant(N, ev, scheme, seed, InvariantMethod::direct, chains);
    return sample_id(ev.at(t), N, scheme, seed, chains);
}

SampleSet sample_invariant(int N, const EvolvedTriple& ev, const JumpScheme& scheme, std::uint64_t seed,
                           InvariantMethod method, int chains) {
    const SemigroupFamily& sg = ev.semigroup();
    if (!sg.is_stable())
        throw HypothesisError("stability", "the invariant measure needs all eigenvalues of B in the left half plane");
    if (method == InvariantMethod::direct) return sample_id(ev.invariant(), N, scheme, seed, chains);
    const double T = scheme.horizon > 0.0 ? scheme.horizon : sg.decay_horizon(1e-6);
    const OuSimulator sim(ev.source(), sg, T, scheme);
    const Vector x0 = Vector::Zero(ev.dimension());
    return fill_blocks(N, ev.dimension(), seed, chains, [&](RandomStream& rng, Eigen::Ref<Matrix> rows) {
        for (Eigen::Index i = 0; i < rows.rows(); ++i) rows.row(i) = sim.simulate(x0, rng).transpose();
    });
}

SampleSet sample_gaussian(const Matrix& Q, int N, std::uint64_t seed, int chains) {
    if (Q.rows() != Q.cols()) throw DomainError("covariance must be square");
    if (!is_symmetric(Q, 1e-12) || (Q.size() > 0 && min_eigenvalue_symmetric(Q) < -1e-12 * std::max(1.0, Q.norm())))
        throw DomainError("covariance is not positive semidefinite");
    const Matrix root = sqrt_psd(Q);
    const int d = static_cast<int>(Q.rows());
    return fill_blocks(N, d, seed, chains, [&](RandomStream& rng, Eigen::Ref<Matrix> rows) {
        Vector z(d);
        for (Eigen::Index i = 0; i < rows.rows(); ++i) {
            for (int j = 0; j < d; ++j) z(j) = rng.normal();
            rows.row(i) = (root * z).transpose();
        }
    });
}

void write_csv(std::ostream& out, const SampleSet& samples) {
    for (Eigen::Index j = 0; j < samples.cols(); ++j) out << (j ? "," : "") << "x" << (j + 1);
    out << '\n';
    char buf[32];
    for (Eigen::Index i = 0; i < samples.rows(); ++i) {
        for (Eigen::Index j = 0; j < samples.cols(); ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", samples(i, j));
            out << (j ? "," : "") << buf;
        }
        out << '\n';
    }
}

}  // namespace mehler
