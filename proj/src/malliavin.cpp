#include "levyito/malliavin.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <string>

#include "levyito/error.hpp"
#include "levyito/parallel.hpp"
#include "levyito/rng.hpp"

namespace levyito
{
namespace
{
double factorial(int n)
{
    double f = 1;
    for (int i = 2; i <= n; ++i)
        f *= i;
    return f;
}

bool jumps_disjoint(JumpSet const& a, JumpSet const& b)
{
    if (a.range && b.range)
        return a.range->intersect(*b.range).empty();
    if (a.range)
        return std::none_of(b.atoms.begin(), b.atoms.end(),
                            [&](double z) { return a.range->contains(z); });
    if (b.range)
        return jumps_disjoint(b, a);
    for (double z : a.atoms)
        if (std::find(b.atoms.begin(), b.atoms.end(), z) != b.atoms.end())
            return false;
    return true;
}

bool cells_disjoint(Cell const& a, Cell const& b)
{
    return a.space.intersect(b.space).empty() || jumps_disjoint(a.jumps, b.jumps);
}

// Exact nu(B) for atomic models; rounded quadrature otherwise.
Rational exact_mass(LevyMeasure const& model, JumpSet const& set)
{
    if (!model.is_atomic())
        return to_rational(model.mass_of(set));
    Rational total = 0;
    for (auto const& a : model.atoms())
        if (set.contains(a.jump))
            total += to_rational(a.mass);
    return total;
}

template<class T>
T compensated_count_as(RealizationView const& r, Cell const& cell);

template<>
double compensated_count_as<double>(RealizationView const& r, Cell const& cell)
{
    return compensated_count(r, cell);
}

template<>
Rational compensated_count_as<Rational>(RealizationView const& r, Cell const& cell)
{
    Rational const length = to_rational(cell.space.hi) - to_rational(cell.space.lo);
    return Rational(count_points(r, cell)) - length * exact_mass(*r.model, cell.jumps);
}

template<class T>
T to_scalar(double v)
{
    if constexpr (std::is_same_v<T, Rational>)
        return to_rational(v);
    else
        return v;
}

template<class T>
T eval_kernel(RealizationView const& r, StepKernel const& h)
{
    if (h.tuples().empty())
        return T(0);
    std::vector<T> nhat;
    nhat.reserve(h.cells().size());
    for (auto const& c : h.cells())
        nhat.push_back(compensated_count_as<T>(r, c));
    T total = 0;
    for (std::size_t t = 0; t < h.tuples().size(); ++t)
    {
        T term = to_scalar<T>(h.values()[t]);
        for (int i : h.tuples()[t])
            term *= nhat[i];
        total += term;
    }
    return total * to_scalar<T>(factorial(h.order()));
}

template<class T>
T eval_chaos_as(RealizationView const& r, ChaosFunctional const& f)
{
    T total = to_scalar<T>(f.constant);
    for (auto const& h : f.kernels)
        total += eval_kernel<T>(r, h);
    return total;
}

template<class T>
T derivative_as(PointRealization const& r, ChaosFunctional const& f, double x, double z)
{
    require(std::abs(x) <= r.window(), Errc::WindowExceeded, "probe outside the window");
    auto const view = r.view();
    T total = 0;
    for (auto const& h : f.kernels)
    {
        auto const s = h.slice(x, z);
        if (s.is_zero())
            continue;
        total += to_scalar<T>(h.order()) * eval_kernel<T>(view, s);
    }
    return total;
}
}  // namespace

//---------------------------------------------------------------------------//
StepKernel::StepKernel(int order, std::vector<Cell> cells, std::vector<KernelEntry> entries)
    : order_(order), cells_(std::move(cells))
{
    require(order >= 0, Errc::InvalidKernel, "kernel order must be >= 0");
    require(order <= kMaxChaosOrder, Errc::SizeLimitExceeded,
            "kernel order capped at " + std::to_string(kMaxChaosOrder));
    auto const m = static_cast<int>(cells_.size());
    for (int i = 0; i < m; ++i)
    {
        auto const& c = cells_[i];
        require(std::isfinite(c.space.lo) && std::isfinite(c.space.hi), Errc::UnboundedSupport,
                "kernel cells must be bounded");
        require(!c.space.empty(), Errc::InvalidKernel, "kernel cells must be non-empty");
        for (int j = 0; j < i; ++j)
            require(cells_disjoint(c, cells_[j]), Errc::InvalidKernel,
                    "kernel cells " + std::to_string(j) + " and " + std::to_string(i)
                        + " overlap");
    }

    // Symmetrize: each ordered entry adds value / k! to its sorted tuple.
    double const k_fact = factorial(order);
    std::map<std::vector<int>, double> sym;
    for (auto& e : entries)
    {
        require(static_cast<int>(e.indices.size()) == order, Errc::InvalidKernel,
                "kernel entry has the wrong number of indices");
        require(std::isfinite(e.value), Errc::InvalidKernel, "kernel entry must be finite");
        for (int i : e.indices)
            require(i >= 0 && i < m, Errc::InvalidKernel, "kernel entry index out of range");
        auto sorted = e.indices;
        std::sort(sorted.begin(), sorted.end());
        bool const repeated = std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end();
        if (repeated)
        {
            require(e.value == 0.0, Errc::InvalidKernel,
                    "kernel coefficients must vanish on repeated indices");
            continue;
        }
        sym[sorted] += e.value / k_fact;
    }
    for (auto& [tuple, value] : sym)
    {
        if (value == 0.0)
            continue;
        tuples_.push_back(tuple);
        values_.push_back(value);
    }
}

StepKernel StepKernel::indicator(Cell cell, double value)
{
    return StepKernel(1, {std::move(cell)}, {{{0}, value}});
}

bool StepKernel::is_zero() const
{
    return tuples_.empty();
}

double StepKernel::squared_norm(LevyMeasure const& model) const
{
    std::vector<double> mu;
    for (auto const& c : cells_)
        mu.push_back(c.space.length() * model.mass_of(c.jumps));
    double total = 0;
    for (std::size_t t = 0; t < tuples_.size(); ++t)
    {
        double term = values_[t] * values_[t];
        for (int i : tuples_[t])
            term *= mu[i];
        total += term;
    }
    return factorial(order_) * total;
}

int StepKernel::cell_of(double x, double z) const
{
    for (std::size_t i = 0; i < cells_.size(); ++i)
        if (cells_[i].contains(x, z))
            return static_cast<int>(i);
    return -1;
}

StepKernel StepKernel::slice(double x, double z) const
{
    return slice_cell(order_ > 0 ? cell_of(x, z) : -1);
}

StepKernel StepKernel::slice_cell(int c) const
{
    StepKernel out;
    out.order_ = std::max(order_ - 1, 0);
    out.cells_ = cells_;
    if (c < 0 || order_ == 0)
        return out;
    for (std::size_t t = 0; t < tuples_.size(); ++t)
    {
        auto const& tuple = tuples_[t];
        auto it = std::find(tuple.begin(), tuple.end(), c);
        if (it == tuple.end())
            continue;
        std::vector<int> rest(tuple.begin(), it);
        rest.insert(rest.end(), it + 1, tuple.end());
        out.tuples_.push_back(std::move(rest));
        out.values_.push_back(values_[t]);
    }
    return out;
}

double StepKernel::extent() const
{
    double w = 0;
    for (auto const& c : cells_)
        w = std::max({w, std::abs(c.space.lo), std::abs(c.space.hi)});
    return w;
}

double StepKernel::right_end() const
{
    double r = -kInf;
    for (auto const& c : cells_)
        r = std::max(r, c.space.hi);
    return r;
}

StepKernel project_kernel(StepKernel const& h, double y)
{
    std::vector<Cell> cells;
    std::vector<int> remap(h.cells().size(), -1);
    for (std::size_t i = 0; i < h.cells().size(); ++i)
    {
        Cell c = h.cells()[i];
        c.space = c.space.intersect({-kInf, y});
        if (c.space.empty())
            continue;
        remap[i] = static_cast<int>(cells.size());
        cells.push_back(std::move(c));
    }
    // Re-enter the symmetric values as ordered entries scaled by k!.
    std::vector<KernelEntry> entries;
    double const k_fact = factorial(h.order());
    for (std::size_t t = 0; t < h.tuples().size(); ++t)
    {
        std::vector<int> idx;
        bool kept = true;
        for (int i : h.tuples()[t])
        {
            kept = kept && remap[i] >= 0;
            idx.push_back(remap[i]);
        }
        if (kept)
            entries.push_back({std::move(idx), h.values()[t] * k_fact});
    }
    return StepKernel(h.order(), std::move(cells), std::move(entries));
}

//---------------------------------------------------------------------------//
double ChaosFunctional::extent() const
{
    double w = 0;
    for (auto const& k : kernels)
        w = std::max(w, k.extent());
    return w;
}

int ChaosFunctional::max_order() const
{
    int m = 0;
    for (auto const& k : kernels)
        m = std::max(m, k.order());
    return m;
}

void validate_chaos(ChaosFunctional const& f)
{
    require(std::isfinite(f.constant), Errc::InvalidArgument, "chaos constant must be finite");
    for (auto const& k : f.kernels)
    {
        require(k.order() >= 1, Errc::InvalidKernel, "chaos kernels have order >= 1");
        require(k.order() <= kMaxChaosOrder, Errc::SizeLimitExceeded,
                "chaos order capped at " + std::to_string(kMaxChaosOrder));
    }
}

double eval_multiple_integral(RealizationView const& r, StepKernel const& h)
{
    return eval_kernel<double>(r, h);
}

Rational eval_multiple_integral_exact(RealizationView const& r, StepKernel const& h)
{
    return eval_kernel<Rational>(r, h);
}

double eval_chaos(RealizationView const& r, ChaosFunctional const& f)
{
    return eval_chaos_as<double>(r, f);
}

Rational eval_chaos_exact(RealizationView const& r, ChaosFunctional const& f)
{
    return eval_chaos_as<Rational>(r, f);
}

double malliavin_derivative(PointRealization const& r, ChaosFunctional const& f, double x,
                            double z)
{
    return derivative_as<double>(r, f, x, z);
}

Rational malliavin_derivative_exact(PointRealization const& r, ChaosFunctional const& f,
                                    double x, double z)
{
    return derivative_as<Rational>(r, f, x, z);
}

Rational add_one_cost(PointRealization const& r, ChaosFunctional const& f, double x, double z)
{
    auto const plus = r.with_point({x, z});
    return eval_chaos_exact(plus.view(), f) - eval_chaos_exact(r.view(), f);
}

double skorohod_predictable(PointRealization const& r, SimpleProcess const& phi)
{
    return eval_I(r, phi);
}

double derivative_pairing(PointRealization const& r, ChaosFunctional const& f,
                          SimpleProcess const& phi)
{
    if (phi.is_zero())
        return 0.0;
    auto const values = phi.values(r);
    auto const view = r.view();
    auto const& model = r.model();
    double total = 0;
    for (auto const& h : f.kernels)
    {
        for (std::size_t c = 0; c < h.cells().size(); ++c)
        {
            auto const& cell = h.cells()[c];
            double phi_mass = 0;  // int_{A_c} Phi dx
            for (std::size_t i = 0; i < phi.size(); ++i)
                phi_mass += values[i] * phi.piece(i).intersect(cell.space).length();
            if (phi_mass == 0.0)
                continue;
            auto const sliced = h.slice_cell(static_cast<int>(c));
            double const d = h.order() * eval_kernel<double>(view, sliced);
            total += d * phi_mass * model.first_moment_of(cell.jumps);
        }
    }
    return total;
}

//---------------------------------------------------------------------------//
OracleCheck derivative_oracle_check(LevyMeasurePtr const& model, ChaosFunctional const& f,
                                    std::size_t realizations, std::size_t probes_per,
                                    std::uint64_t seed)
{
    validate_chaos(f);
    double const window = std::max(f.extent(), 1.0);
    OracleCheck out;
    for (std::size_t j = 0; j < realizations; ++j)
    {
        auto const r = sample_prm(model, window, sample_seed(seed, j));
        Philox4x32 rng(derive_seed(seed, 1, j));
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        for (std::size_t q = 0; q < probes_per; ++q)
        {
            double x;
            double z = model->sample_jump(rng);
            bool const aim = !f.kernels.empty() && q % 2 == 0;
            if (aim)
            {
                auto const& h = f.kernels[static_cast<std::size_t>(unit(rng) * f.kernels.size())
                                          % f.kernels.size()];
                auto const& cell =
                    h.cells()[static_cast<std::size_t>(unit(rng) * h.cells().size())
                              % h.cells().size()];
                x = cell.space.hi - unit(rng) * cell.space.length();
                if (!cell.jumps.range && !cell.jumps.atoms.empty())
                    z = cell.jumps.atoms[static_cast<std::size_t>(unit(rng)
                                                                  * cell.jumps.atoms.size())
                                         % cell.jumps.atoms.size()];
            }
            else
            {
                x = window * (1.0 - 2.0 * unit(rng));
            }
            bool inside = false;
            for (auto const& h : f.kernels)
                inside = inside || h.cell_of(x, z) >= 0;
            out.inside_cells += inside ? 1 : 0;
            ++out.probes;
            if (malliavin_derivative_exact(r, f, x, z) != add_one_cost(r, f, x, z))
                ++out.mismatches;
        }
    }
    out.pass = out.probes > 0 && out.mismatches == 0;
    return out;
}

namespace
{
GapCheck paired(std::vector<double> const& a, std::vector<double> const& b,
                double se_multiplier)
{
    std::vector<double> d(a.size());
    for (std::size_t j = 0; j < a.size(); ++j)
        d[j] = a[j] - b[j];
    auto const t = mc_mean_test(d, 0.0, se_multiplier);
    return {estimate_mean(a).mean, estimate_mean(b).mean, t.estimate, t.se, t.z, t.pass};
}
}  // namespace

GapCheck duality_gap(LevyMeasurePtr const& model, ChaosFunctional const& f,
                     SimpleProcess const& phi, McOptions const& mc, double se_multiplier)
{
    validate_chaos(f);
    double const window = std::max(f.extent(), phi.required_window());
    std::vector<double> pairing(mc.n_samples);
    std::vector<double> product(mc.n_samples);
    parallel_for(mc.n_samples, mc.threads, [&](std::size_t j) {
        auto const r = sample_prm(model, window, sample_seed(mc.seed, j));
        pairing[j] = derivative_pairing(r, f, phi);
        product[j] = eval_chaos(r.view(), f) * skorohod_predictable(r, phi);
    });
    auto const gap = paired(pairing, product, se_multiplier);
    std::vector<double> d(pairing.size());
    for (std::size_t j = 0; j < d.size(); ++j)
        d[j] = pairing[j] - product[j];
    offer_samples(mc, d);
    return gap;
}

Lemma41Result lemma41_check(LevyMeasurePtr const& model, StepKernel const& h, double y,
                            Coefficient const& g, McOptions const& mc, double se_multiplier)
{
    require(g.horizon() <= y, Errc::HorizonViolation,
            "test functional must be known at y = " + std::to_string(y));
    auto const hy = project_kernel(h, y);
    double const window = std::max({h.extent(), g.extent(), std::abs(y)});
    std::vector<double> weighted(mc.n_samples);
    std::vector<double> sq_projected(mc.n_samples);
    std::vector<double> sq_full(mc.n_samples);
    parallel_for(mc.n_samples, mc.threads, [&](std::size_t j) {
        auto const r = sample_prm(model, window, sample_seed(mc.seed, j));
        auto const view = r.view();
        double const full = eval_multiple_integral(view, h);
        double const proj = eval_multiple_integral(view, hy);
        weighted[j] = (full - proj) * g.evaluate(r.prefix(y));
        sq_projected[j] = proj * proj;
        sq_full[j] = full * full;
    });
    Lemma41Result out;
    offer_samples(mc, weighted);
    auto const t = mc_mean_test(weighted, 0.0, se_multiplier);
    out.projection = {t.estimate, 0.0, t.estimate, t.se, t.z, t.pass};

    std::vector<double> d(mc.n_samples);
    for (std::size_t j = 0; j < d.size(); ++j)
        d[j] = sq_projected[j] - sq_full[j];
    auto const m = estimate_mean(d);
    out.contraction.lhs = estimate_mean(sq_projected).mean;
    out.contraction.rhs = estimate_mean(sq_full).mean;
    out.contraction.gap = m.mean;
    out.contraction.se = m.se;
    out.contraction.z = m.se > 0 ? m.mean / m.se : (m.mean > 0 ? INFINITY : 0.0);
    out.contraction.pass = out.contraction.z <= se_multiplier;

    out.exact_projected = factorial(h.order()) * hy.squared_norm(*model);
    out.exact_full = factorial(h.order()) * h.squared_norm(*model);
    out.pass = out.projection.pass && out.contraction.pass
               && out.exact_projected <= out.exact_full * (1 + 1e-12);
    return out;
}

Lemma42Result lemma42_check(LevyMeasurePtr const& model, ChaosFunctional const& f, double y,
                            std::size_t realizations, std::size_t probes_per,
                            std::uint64_t seed)
{
    validate_chaos(f);
    for (auto const& h : f.kernels)
        require(h.right_end() <= y, Errc::InvalidArgument,
                "every kernel cell must lie left of y");
    double const window = std::max(f.extent(), std::abs(y) + 1.0);
    Lemma42Result out;
    for (std::size_t j = 0; j < realizations; ++j)
    {
        auto const r = sample_prm(model, window, sample_seed(seed, j));
        Philox4x32 rng(derive_seed(seed, 1, j));
        std::uniform_real_distribution<double> right(y, window);
        for (std::size_t q = 0; q < probes_per; ++q)
        {
            double x = right(rng);
            if (!(x > y))
                x = window;
            double const z = model->sample_jump(rng);
            ++out.probes;
            if (malliavin_derivative_exact(r, f, x, z) != 0)
                ++out.nonzero;
        }
    }
    out.pass = out.probes > 0 && out.nonzero == 0;
    return out;
}

IsometryResult chaos_isometry_check(LevyMeasurePtr const& model, StepKernel const& h,
                                    McOptions const& mc, double se_multiplier)
{
    double const window = h.extent();
    std::vector<double> squares(mc.n_samples);
    parallel_for(mc.n_samples, mc.threads, [&](std::size_t j) {
        auto const r = sample_prm(model, window, sample_seed(mc.seed, j));
        double const v = eval_multiple_integral(r.view(), h);
        squares[j] = v * v;
    });
    double const target = factorial(h.order()) * h.squared_norm(*model);
    offer_samples(mc, squares);
    auto const t = mc_mean_test(squares, target, se_multiplier);
    return {t.estimate, target, t.se, t.z, t.pass};
}

IsometryResult chaos_orthogonality_check(LevyMeasurePtr const& model, StepKernel const& f,
                                         StepKernel const& g, McOptions const& mc,
                                         double se_multiplier)
{
    require(f.order() != g.order(), Errc::InvalidArgument,
            "orthogonality check needs different chaos orders");
    double const window = std::max(f.extent(), g.extent());
    std::vector<double> products(mc.n_samples);
    parallel_for(mc.n_samples, mc.threads, [&](std::size_t j) {
        auto const r = sample_prm(model, window, sample_seed(mc.seed, j));
        auto const view = r.view();
        products[j] = eval_multiple_integral(view, f) * eval_multiple_integral(view, g);
    });
    offer_samples(mc, products);
    auto const t = mc_mean_test(products, 0.0, se_multiplier);
    return {t.estimate, 0.0, t.se, t.z, t.pass};
}

}  // namespace levyito
