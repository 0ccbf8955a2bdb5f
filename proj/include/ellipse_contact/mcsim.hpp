#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "contact.hpp"

namespace ellipse_contact {

class InvalidMCConfig : public ContactError {
public:
    using ContactError::ContactError;
};

class PackingInfeasible : public ContactError {
public:
    using ContactError::ContactError;
};

/// Densest packing fraction of congruent ellipses in the plane.
inline constexpr double max_packing_fraction = 0.9069;

struct Species {
    EllipseShape shape;
    double fraction = 1.0;
};

struct MCConfig {
    int n_particles = 0;
    std::vector<Species> species;
    double Lx = 0.0;
    double Ly = 0.0;
    bool periodic = true;
    double max_translation = 0.1;
    double max_rotation = 0.1; // radians
    std::uint64_t seed = 1;
    int sweeps = 100;
    int sample_every = 10;
    bool audit = false;

    double max_semi_major() const
    {
        double m = 0.0;
        for (const auto& s : species) m = std::max(m, s.shape.a());
        return m;
    }

    double max_semi_minor() const
    {
        double m = 0.0;
        for (const auto& s : species) m = std::max(m, s.shape.b());
        return m;
    }

    /// Largest contact distance over species pairs.
    double cell_size() const { return 2.0 * max_semi_major(); }

    /// Particle counts per species; remainders go to the largest fractional parts.
    std::vector<int> species_counts() const
    {
        double total = 0.0;
        for (const auto& s : species) total += s.fraction;
        std::vector<int> counts(species.size());
        std::vector<std::pair<double, std::size_t>> rest;
        int assigned = 0;
        for (std::size_t i = 0; i < species.size(); ++i) {
            const double exact = n_particles * species[i].fraction / total;
            counts[i] = static_cast<int>(std::floor(exact));
            assigned += counts[i];
            rest.emplace_back(exact - counts[i], i);
        }
        std::stable_sort(rest.begin(), rest.end(), [](auto a, auto b) { return a.first > b.first; });
        for (std::size_t k = 0; assigned < n_particles; ++k, ++assigned) ++counts[rest[k % rest.size()].second];
        return counts;
    }

    double packing_fraction() const
    {
        const auto counts = species_counts();
        double area = 0.0;
        for (std::size_t i = 0; i < species.size(); ++i) area += counts[i] * species[i].shape.area();
        return area / (Lx * Ly);
    }

    void validate() const
    {
        if (n_particles < 1) throw InvalidMCConfig("MCConfig: n_particles must be >= 1");
        if (species.empty()) throw InvalidMCConfig("MCConfig: at least one species is required");
        for (const auto& s : species)
            if (!(s.fraction > 0.0) || !std::isfinite(s.fraction))
                throw InvalidMCConfig("MCConfig: species fractions must be positive");
        if (!(Lx > 0.0) || !(Ly > 0.0) || !std::isfinite(Lx) || !std::isfinite(Ly))
            throw InvalidMCConfig("MCConfig: box lengths must be positive");
        if (!periodic) throw InvalidMCConfig("MCConfig: only periodic boxes are supported");
        if (!(max_translation >= 0.0) || !(max_rotation >= 0.0))
            throw InvalidMCConfig("MCConfig: move amplitudes must be non-negative");
        if (sweeps < 0) throw InvalidMCConfig("MCConfig: sweeps must be non-negative");
        if (sample_every < 1) throw InvalidMCConfig("MCConfig: sample_every must be >= 1");
        if (std::min(Lx, Ly) < 2.0 * cell_size())
            throw InvalidMCConfig("MCConfig: box must satisfy L >= 2 * cell size (4 * max semi-major axis)");
        if (packing_fraction() >= max_packing_fraction)
            throw PackingInfeasible("MCConfig: packing fraction " + std::to_string(packing_fraction()) +
                                    " is not below 0.9069");
    }
};

/// Box dimensions giving the requested packing fraction for a near-square
/// staggered lattice of aligned ellipses.
inline std::pair<double, double> lattice_box(const MCConfig& cfg, double packing_fraction)
{
    if (!(packing_fraction > 0.0) || !(packing_fraction < max_packing_fraction))
        throw PackingInfeasible("lattice_box: packing fraction must lie in (0, 0.9069)");
    MCConfig tmp = cfg;
    tmp.Lx = tmp.Ly = 1.0;
    const double area = tmp.packing_fraction() / packing_fraction;
    const double a = cfg.max_semi_major(), b = cfg.max_semi_minor();
    int ny = 2 * std::max(1, static_cast<int>(std::lround(0.5 * std::sqrt(2.0 * a * cfg.n_particles / (std::sqrt(3.0) * b)))));
    const int nx = (cfg.n_particles + ny - 1) / ny;
    const double ratio = (2.0 * a * nx) / (std::sqrt(3.0) * b * ny);
    const double lx = std::sqrt(area * ratio);
    return {lx, area / lx};
}

/// Deterministic 64-bit generator; uniform() uses the top 53 bits.
class McRng {
public:
    explicit McRng(std::uint64_t seed) : eng_(seed) {}
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
    double symmetric(double amp) { return amp * (2.0 * uniform() - 1.0); }
    std::size_t index(std::size_t n) { return std::min(n - 1, static_cast<std::size_t>(uniform() * n)); }

private:
    std::mt19937_64 eng_;
};

struct MoveStats {
    std::uint64_t attempted = 0;
    std::uint64_t accepted = 0;

    double ratio() const { return attempted ? static_cast<double>(accepted) / attempted : 1.0; }
    MoveStats& operator+=(const MoveStats& o)
    {
        attempted += o.attempted;
        accepted += o.accepted;
        return *this;
    }
};

struct SweepStats {
    MoveStats translation;
    MoveStats rotation;
    std::uint64_t audit_overlaps = 0;   // overlapping pairs found after the sweep
    std::uint64_t audit_mismatches = 0; // cell-list and all-pairs decisions differed
    bool audited = false;

    MoveStats total() const
    {
        MoveStats t = translation;
        t += rotation;
        return t;
    }
};

/// Uniform grid over a periodic box; every particle sits in exactly one cell.
class CellList {
public:
    CellList() = default;
    CellList(double Lx, double Ly, double min_cell)
        : nx_(std::max(1, static_cast<int>(std::floor(Lx / min_cell)))),
          ny_(std::max(1, static_cast<int>(std::floor(Ly / min_cell)))), w_(Lx / nx_), h_(Ly / ny_),
          cells_(static_cast<std::size_t>(nx_) * ny_)
    {
    }

    int cell_of_point(Vec2 p) const
    {
        const int cx = std::clamp(static_cast<int>(std::floor(p.x / w_)), 0, nx_ - 1);
        const int cy = std::clamp(static_cast<int>(std::floor(p.y / h_)), 0, ny_ - 1);
        return cy * nx_ + cx;
    }

    void build(const std::vector<Vec2>& positions)
    {
        for (auto& c : cells_) c.clear();
        owner_.assign(positions.size(), -1);
        for (std::size_t i = 0; i < positions.size(); ++i) insert(static_cast<int>(i), cell_of_point(positions[i]));
    }

    void move(int i, Vec2 p)
    {
        const int c = cell_of_point(p);
        if (c == owner_[i]) return;
        auto& old = cells_[owner_[i]];
        old.erase(std::find(old.begin(), old.end(), i));
        insert(i, c);
    }

    /// Distinct cells in the 3x3 block around the cell containing p.
    std::vector<int> neighbourhood(Vec2 p) const
    {
        const int c = cell_of_point(p);
        const int cx = c % nx_, cy = c / nx_;
        std::vector<int> out;
        out.reserve(9);
        for (int dy = -1; dy <= 1; ++dy)
            for (int dx = -1; dx <= 1; ++dx) {
                const int x = (cx + dx + nx_) % nx_, y = (cy + dy + ny_) % ny_;
                const int id = y * nx_ + x;
                if (std::find(out.begin(), out.end(), id) == out.end()) out.push_back(id);
            }
        return out;
    }

    const std::vector<int>& members(int cell) const { return cells_[cell]; }
    int owner(int i) const { return owner_[i]; }
    int nx() const { return nx_; }
    int ny() const { return ny_; }

private:
    void insert(int i, int c)
    {
        cells_[c].push_back(i);
        owner_[i] = c;
    }

    int nx_ = 1, ny_ = 1;
    double w_ = 1.0, h_ = 1.0;
    std::vector<std::vector<int>> cells_;
    std::vector<int> owner_;
};

struct MCState {
    std::vector<Vec2> positions;
    std::vector<UnitVec2> orientations;
    std::vector<int> species_index;
    double Lx = 0.0;
    double Ly = 0.0;
    CellList cells;
    MoveStats translation;
    MoveStats rotation;
    std::uint64_t moves_since_renormalization = 0;
    std::uint64_t sweeps_done = 0;

    std::size_t size() const { return positions.size(); }

    Vec2 minimum_image(Vec2 r) const
    {
        return {r.x - Lx * std::nearbyint(r.x / Lx), r.y - Ly * std::nearbyint(r.y / Ly)};
    }

    Vec2 wrap(Vec2 p) const
    {
        double x = p.x - Lx * std::floor(p.x / Lx);
        double y = p.y - Ly * std::floor(p.y / Ly);
        if (x >= Lx) x -= Lx;
        if (y >= Ly) y -= Ly;
        return {x, y};
    }
};

/// Overlap verdict for a pair at minimum-image separation r (from i to j), with
/// quick decisions from the bounds b_i + b_j <= d <= a_i + a_j.
inline OverlapVerdict pair_verdict(const EllipseShape& si, UnitVec2 ki, const EllipseShape& sj, UnitVec2 kj, Vec2 r)
{
    const double dist = r.norm();
    if (dist > (si.a() + sj.a()) * (1.0 + tangent_tolerance)) return OverlapVerdict::Disjoint;
    if (dist < (si.b() + sj.b()) * (1.0 - tangent_tolerance)) return OverlapVerdict::Overlapping;
    return overlap(si, sj, ki, kj, r);
}

namespace detail {

inline bool fits_cell_list(const MCState& st, int i, Vec2 p, UnitVec2 k, const MCConfig& cfg)
{
    const EllipseShape& si = cfg.species[st.species_index[i]].shape;
    for (int c : st.cells.neighbourhood(p))
        for (int j : st.cells.members(c)) {
            if (j == i) continue;
            const EllipseShape& sj = cfg.species[st.species_index[j]].shape;
            if (pair_verdict(si, k, sj, st.orientations[j], st.minimum_image(st.positions[j] - p)) !=
                OverlapVerdict::Disjoint)
                return false;
        }
    return true;
}

inline bool fits_all_pairs(const MCState& st, int i, Vec2 p, UnitVec2 k, const MCConfig& cfg)
{
    const EllipseShape& si = cfg.species[st.species_index[i]].shape;
    for (std::size_t j = 0; j < st.size(); ++j) {
        if (static_cast<int>(j) == i) continue;
        const EllipseShape& sj = cfg.species[st.species_index[j]].shape;
        if (pair_verdict(si, k, sj, st.orientations[j], st.minimum_image(st.positions[j] - p)) !=
            OverlapVerdict::Disjoint)
            return false;
    }
    return true;
}

} // namespace detail

/// Number of pairs that are not Disjoint, by exhaustive search.
inline std::uint64_t count_overlaps(const MCState& st, const MCConfig& cfg)
{
    std::uint64_t n = 0;
    for (std::size_t i = 0; i < st.size(); ++i)
        for (std::size_t j = i + 1; j < st.size(); ++j) {
            const auto v = pair_verdict(cfg.species[st.species_index[i]].shape, st.orientations[i],
                                        cfg.species[st.species_index[j]].shape, st.orientations[j],
                                        st.minimum_image(st.positions[j] - st.positions[i]));
            if (v != OverlapVerdict::Disjoint) ++n;
        }
    return n;
}

/// True when every particle is filed under the cell containing its position.
inline bool cell_list_consistent(const MCState& st)
{
    for (std::size_t i = 0; i < st.size(); ++i)
        if (st.cells.owner(static_cast<int>(i)) != st.cells.cell_of_point(st.positions[i])) return false;
    return true;
}

/// Particles on a dilated staggered lattice with common orientation along x.
inline MCState init_state(const MCConfig& cfg, McRng& rng)
{
    cfg.validate();
    const int n = cfg.n_particles;
    const double a = cfg.max_semi_major(), b = cfg.max_semi_minor();

    // Aligned ellipses are the image of unit circles under diag(a, b); a lattice
    // whose image has nearest-neighbour distance > 2 is overlap free.
    int best_nx = 0, best_ny = 0;
    double best_gap = 0.0;
    for (int ny = 1; ny <= n; ++ny) {
        const int nx = (n + ny - 1) / ny;
        const double dx = cfg.Lx / (nx * a), dy = cfg.Ly / (ny * b);
        double gap = dx;
        if (ny == 1) gap = std::min(gap, cfg.Ly / b);
        else if (ny % 2 == 0) gap = std::min({gap, std::hypot(0.5 * dx, dy), 2.0 * dy});
        else gap = std::min({gap, std::hypot(0.5 * dx, dy), dy});
        if (gap > best_gap) {
            best_gap = gap;
            best_nx = nx;
            best_ny = ny;
        }
    }
    if (!(best_gap > 2.0 * (1.0 + 1e-6)))
        throw PackingInfeasible("init_state: no staggered lattice of " + std::to_string(n) +
                                " particles fits the box without overlap");

    MCState st;
    st.Lx = cfg.Lx;
    st.Ly = cfg.Ly;
    const double sx = cfg.Lx / best_nx, sy = cfg.Ly / best_ny;
    for (int j = 0; j < best_ny && static_cast<int>(st.positions.size()) < n; ++j)
        for (int i = 0; i < best_nx && static_cast<int>(st.positions.size()) < n; ++i) {
            const double shift = (best_ny > 1 && j % 2 == 1) ? 0.5 * sx : 0.0;
            st.positions.push_back(st.wrap({(i + 0.25) * sx + shift, (j + 0.5) * sy}));
        }
    st.orientations.assign(n, UnitVec2(1.0, 0.0));

    const auto counts = cfg.species_counts();
    for (std::size_t s = 0; s < counts.size(); ++s) st.species_index.insert(st.species_index.end(), counts[s], int(s));
    for (std::size_t i = st.species_index.size(); i > 1; --i) std::swap(st.species_index[i - 1], st.species_index[rng.index(i)]);

    st.cells = CellList(cfg.Lx, cfg.Ly, cfg.cell_size());
    st.cells.build(st.positions);
    if (count_overlaps(st, cfg) != 0) throw PackingInfeasible("init_state: lattice construction produced overlaps");
    return st;
}

inline constexpr std::uint64_t renormalize_every = 1'000'000;

/// N trial moves, each a translation or a rotation with equal probability.
/// A move is accepted only if the particle is Disjoint from every neighbour.
inline SweepStats mc_sweep(MCState& st, const MCConfig& cfg, McRng& rng)
{
    SweepStats stats;
    const std::size_t n = st.size();
    for (std::size_t m = 0; m < n; ++m) {
        const int i = static_cast<int>(rng.index(n));
        const bool translate = rng.uniform() < 0.5;
        Vec2 p = st.positions[i];
        UnitVec2 k = st.orientations[i];
        if (translate) {
            const double dx = rng.symmetric(cfg.max_translation);
            const double dy = rng.symmetric(cfg.max_translation);
            p = st.wrap(p + Vec2{dx, dy});
        } else {
            const double ang = rng.symmetric(cfg.max_rotation);
            k = k.rotated(std::cos(ang), std::sin(ang));
        }
        const bool ok = detail::fits_cell_list(st, i, p, k, cfg);
        if (cfg.audit && ok != detail::fits_all_pairs(st, i, p, k, cfg)) ++stats.audit_mismatches;

        MoveStats& ms = translate ? stats.translation : stats.rotation;
        ++ms.attempted;
        if (ok) {
            ++ms.accepted;
            st.positions[i] = p;
            st.orientations[i] = k;
            st.cells.move(i, p);
        }
        if (++st.moves_since_renormalization >= renormalize_every) {
            for (auto& o : st.orientations) o = o.renormalized();
            st.moves_since_renormalization = 0;
        }
    }
    if (cfg.audit) {
        stats.audited = true;
        stats.audit_overlaps = count_overlaps(st, cfg);
        if (!cell_list_consistent(st)) ++stats.audit_mismatches;
    }
    st.translation += stats.translation;
    st.rotation += stats.rotation;
    ++st.sweeps_done;
    return stats;
}

/// 2D nematic order parameter |<(cos 2 theta, sin 2 theta)>|.
inline double order_parameter(const MCState& st)
{
    if (st.orientations.empty()) throw ContactError("order_parameter: no particles");
    double c = 0.0, s = 0.0;
    for (const auto& k : st.orientations) {
        c += k.x() * k.x() - k.y() * k.y();
        s += 2.0 * k.x() * k.y();
    }
    const double n = static_cast<double>(st.orientations.size());
    return std::min(1.0, std::hypot(c / n, s / n));
}

struct RunSummary {
    int sweeps = 0;
    MoveStats translation;
    MoveStats rotation;
    std::uint64_t audit_overlaps = 0;
    std::uint64_t audit_mismatches = 0;
    double final_order = 0.0;
    double packing_fraction = 0.0;

    double acceptance() const
    {
        MoveStats t = translation;
        t += rotation;
        return t.ratio();
    }
};

/// Runs cfg.sweeps sweeps; on_sample is called at sweep 0 and every sample_every sweeps.
inline RunSummary run_simulation(const MCConfig& cfg,
                                 const std::function<void(int, const MCState&, const SweepStats&)>& on_sample = {})
{
    McRng rng(cfg.seed);
    MCState st = init_state(cfg, rng);
    RunSummary sum;
    sum.packing_fraction = cfg.packing_fraction();
    if (on_sample) on_sample(0, st, SweepStats{});
    for (int sweep = 1; sweep <= cfg.sweeps; ++sweep) {
        const SweepStats s = mc_sweep(st, cfg, rng);
        sum.audit_overlaps += s.audit_overlaps;
        sum.audit_mismatches += s.audit_mismatches;
        if (on_sample && sweep % cfg.sample_every == 0) on_sample(sweep, st, s);
    }
    sum.sweeps = cfg.sweeps;
    sum.translation = st.translation;
    sum.rotation = st.rotation;
    sum.final_order = order_parameter(st);
    return sum;
}

} // namespace ellipse_contact
