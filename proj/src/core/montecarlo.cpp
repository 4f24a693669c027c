#include "scn/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <thread>

#include "scn/error.hpp"
#include "scn/numerics.hpp"

namespace scn::mc {

namespace {

constexpr double kEdgeGuard = 1e-6;
constexpr std::size_t kMaxRedraws = 1000;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

double unit_uniform(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

double wrap(double d, double side) {
    if (d > 0.5 * side) return d - side;
    if (d < -0.5 * side) return d + side;
    return d;
}

// Uniform grid over the torus with BS indices bucketed per cell. BSs are
// stored in cell order, so a BS id is its index after bucketing.
class CellGrid {
public:
    CellGrid(std::vector<Point>& bs, double side, double lambda) : side_(side) {
        const double target = std::max(1.0, std::floor(side * std::sqrt(lambda)));
        cells_ = static_cast<std::size_t>(std::min(target, 1024.0));
        cell_ = side / static_cast<double>(cells_);
        start_.assign(cells_ * cells_ + 1, 0);
        std::vector<std::size_t> cell_of(bs.size());
        for (std::size_t i = 0; i < bs.size(); ++i) {
            cell_of[i] = index(cell_coord(bs[i].x), cell_coord(bs[i].y));
            ++start_[cell_of[i] + 1];
        }
        for (std::size_t c = 0; c < cells_ * cells_; ++c) start_[c + 1] += start_[c];
        std::vector<Point> sorted(bs.size());
        std::vector<std::size_t> fill(start_.begin(), start_.end() - 1);
        for (std::size_t i = 0; i < bs.size(); ++i) sorted[fill[cell_of[i]]++] = bs[i];
        bs.swap(sorted);
    }

    std::size_t cells() const { return cells_; }
    double cell_size() const { return cell_; }
    std::size_t cell_coord(double v) const {
        const auto c = static_cast<long long>(std::floor((v + 0.5 * side_) / cell_));
        return static_cast<std::size_t>(std::clamp<long long>(c, 0, static_cast<long long>(cells_) - 1));
    }
    std::size_t index(std::size_t cx, std::size_t cy) const { return cy * cells_ + cx; }
    std::size_t begin(std::size_t cell) const { return start_[cell]; }
    std::size_t end(std::size_t cell) const { return start_[cell + 1]; }

private:
    double side_;
    std::size_t cells_;
    double cell_;
    std::vector<std::size_t> start_;
};

struct Association {
    std::uint32_t bs = 0;
    double gain = 0.0;
    double distance = 0.0;
    Path path = Path::NLoS;
};

double link_gain(const PathLossModel& model, std::uint64_t link_seed, std::uint32_t ue, std::uint32_t bs, double d,
                 Path* path_out) {
    const Path path = link_is_los(model, link_seed, ue, bs, d) ? Path::LoS : Path::NLoS;
    if (path_out) *path_out = path;
    return model.zeta(path, d);
}

// Strongest BS for a UE. Rings of cells are scanned outwards until the gain
// envelope at the ring's minimum distance cannot beat the current best.
Association associate(const SimConfig& cfg, const CellGrid& grid, const std::vector<Point>& bs, Point ue,
                      std::uint32_t ue_id, std::uint64_t link_seed) {
    Association best;
    bool found = false;
    const auto consider = [&](std::uint32_t b) {
        const double d = torus_distance(ue, bs[b], cfg.window_side_km);
        if (!(d > 0.0)) return;
        Path path;
        const double g = link_gain(cfg.model, link_seed, ue_id, b, d, &path);
        if (!found || g > best.gain) {
            best = Association{b, g, d, path};
            found = true;
        }
    };
    const std::size_t n = grid.cells();
    const auto cx = static_cast<long long>(grid.cell_coord(ue.x));
    const auto cy = static_cast<long long>(grid.cell_coord(ue.y));
    const auto wrap_cell = [n](long long c) {
        const auto m = static_cast<long long>(n);
        return static_cast<std::size_t>(((c % m) + m) % m);
    };
    for (long long k = 0;; ++k) {
        if (k >= 2 && found && cfg.model.gain_envelope(static_cast<double>(k - 1) * grid.cell_size()) < best.gain) {
            break;
        }
        if (static_cast<std::size_t>(2 * k + 1) > n) {
            // The ring would wrap onto itself: finish with a full scan.
            for (std::uint32_t b = 0; b < bs.size(); ++b) consider(b);
            break;
        }
        for (long long dy = -k; dy <= k; ++dy) {
            const bool edge_row = dy == -k || dy == k;
            for (long long dx = -k; dx <= k; dx += edge_row ? 1 : 2 * k) {
                const std::size_t cell = grid.index(wrap_cell(cx + dx), wrap_cell(cy + dy));
                for (std::size_t b = grid.begin(cell); b < grid.end(cell); ++b) consider(static_cast<std::uint32_t>(b));
                if (k == 0) break;
            }
        }
    }
    if (!found) raise(ErrorCode::DegenerateWindow, "no BS available for association");
    return best;
}

std::vector<Point> uniform_points(std::mt19937_64& rng, double mean, double side) {
    std::poisson_distribution<long long> count(mean);
    std::uniform_real_distribution<double> coord(-0.5 * side, 0.5 * side);
    std::vector<Point> pts(static_cast<std::size_t>(count(rng)));
    for (auto& p : pts) {
        p.x = coord(rng);
        p.y = coord(rng);
    }
    return pts;
}

}  // namespace

double SimConfig::min_window_side(const PathLossModel& model, double lambda_bs) {
    const double mean_distance = 0.5 / std::sqrt(lambda_bs);
    const double target = kEdgeGuard * model.gain_envelope(mean_distance);
    const auto excess = [&](double log_r) { return std::log(model.gain_envelope(std::exp(log_r)) / target); };
    const double log_r = numerics::find_root(excess, std::log(mean_distance), std::log(1e5), 1e-9);
    return 2.0 * std::exp(log_r);
}

double SimConfig::default_window_side(const PathLossModel& model, double lambda_bs) {
    return std::max({4.0 / std::sqrt(lambda_bs), 3.0, min_window_side(model, lambda_bs) * (1.0 + 1e-9)});
}

void SimConfig::finalize() {
    network.validate();
    if (window_side_km == 0.0) window_side_km = default_window_side(model, network.lambda_bs);
    validate();
}

void SimConfig::validate() const {
    network.validate();
    if (trials < 1) raise(ErrorCode::InvalidArgument, "trials must be >= 1");
    if (!(window_side_km > 0.0)) raise(ErrorCode::InvalidArgument, "window side must be positive");
    const double needed = min_window_side(model, network.lambda_bs);
    if (window_side_km < needed) {
        std::ostringstream os;
        os << "window side " << window_side_km << " km is below the edge-effect guard of " << needed << " km";
        raise(ErrorCode::InvalidArgument, os.str());
    }
    for (double g : gamma_list) {
        if (!(g > 0.0)) raise(ErrorCode::InvalidArgument, "SINR thresholds must be positive");
    }
}

std::uint64_t trial_seed(std::uint64_t master_seed, std::size_t trial_index) {
    return splitmix64(master_seed ^ splitmix64(0xA5A5A5A5ull + trial_index));
}

double torus_distance(Point a, Point b, double side_km) {
    return std::hypot(wrap(a.x - b.x, side_km), wrap(a.y - b.y, side_km));
}

bool link_is_los(const PathLossModel& model, std::uint64_t link_seed, std::uint32_t ue_id, std::uint32_t bs_id,
                 double distance_km) {
    const double p = model.los_probability(distance_km);
    if (p <= 0.0) return false;
    if (p >= 1.0) return true;
    const std::uint64_t h = splitmix64(splitmix64(link_seed ^ (std::uint64_t{ue_id} << 32 | bs_id)) + bs_id);
    return unit_uniform(h) < p;
}

Snapshot draw_snapshot(const SimConfig& cfg, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const double side = cfg.window_side_km;
    const double area = side * side;
    Snapshot snap;
    snap.link_seed = splitmix64(seed ^ 0x5DEECE66Dull);
    for (;;) {
        snap.bs = uniform_points(rng, cfg.network.lambda_bs * area, side);
        if (!snap.bs.empty()) break;
        if (++snap.degenerate_redraws > kMaxRedraws) raise(ErrorCode::DegenerateWindow, "window keeps coming up empty");
    }
    if (snap.bs.size() >= kTypicalUeId) raise(ErrorCode::InvalidArgument, "too many BSs in the window");
    const CellGrid grid(snap.bs, side, cfg.network.lambda_bs);

    const bool full_load = std::isinf(cfg.network.rho_ue);
    snap.active.assign(snap.bs.size(), full_load ? 1 : 0);
    if (!full_load && cfg.network.rho_ue > 0.0) {
        snap.ue = uniform_points(rng, cfg.network.rho_ue * area, side);
        snap.ue_serving.resize(snap.ue.size());
        for (std::size_t u = 0; u < snap.ue.size(); ++u) {
            const Association a = associate(cfg, grid, snap.bs, snap.ue[u], static_cast<std::uint32_t>(u), snap.link_seed);
            snap.ue_serving[u] = a.bs;
            snap.active[a.bs] = 1;
        }
    }
    const Association typical = associate(cfg, grid, snap.bs, Point{0.0, 0.0}, kTypicalUeId, snap.link_seed);
    snap.typical_serving = typical.bs;
    snap.typical_path = typical.path;
    snap.typical_distance_km = typical.distance;
    snap.typical_gain = typical.gain;
    return snap;
}

TrialOutcome run_trial(const SimConfig& cfg, std::uint64_t seed) {
    const Snapshot snap = draw_snapshot(cfg, seed);
    // Fading comes from its own stream so the geometry draw stays reusable.
    std::mt19937_64 fading_rng(splitmix64(seed ^ 0xFADEull));
    std::exponential_distribution<double> fading(1.0);

    TrialOutcome out;
    out.total_bs_count = snap.bs.size();
    out.activated_bs_count = static_cast<std::size_t>(std::count(snap.active.begin(), snap.active.end(), 1));
    out.serving_path = snap.typical_path;
    out.serving_distance_km = snap.typical_distance_km;
    out.degenerate_redraws = snap.degenerate_redraws;

    const double power = cfg.network.tx_power_mw;
    const double signal = power * snap.typical_gain * fading(fading_rng);
    double interference = 0.0;
    const Point origin{0.0, 0.0};
    for (std::uint32_t b = 0; b < snap.bs.size(); ++b) {
        if (!snap.active[b] || b == snap.typical_serving) continue;
        const double d = torus_distance(origin, snap.bs[b], cfg.window_side_km);
        if (!(d > 0.0)) continue;
        interference += power * link_gain(cfg.model, snap.link_seed, kTypicalUeId, b, d, nullptr) * fading(fading_rng);
    }
    out.interference_mw = interference;
    out.sinr_linear = signal / (interference + cfg.network.noise_power_mw);
    return out;
}

std::vector<TrialOutcome> run_trials(const SimConfig& cfg, unsigned workers) {
    cfg.validate();
    std::vector<TrialOutcome> outcomes(cfg.trials);
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, cfg.trials));
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    const auto work = [&] {
        for (std::size_t i; !failed && (i = next.fetch_add(1)) < cfg.trials;) {
            try {
                outcomes[i] = run_trial(cfg, trial_seed(cfg.seed, i));
            } catch (...) {
                if (!failed.exchange(true)) failure = std::current_exception();
            }
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    }
    if (failure) std::rethrow_exception(failure);
    return outcomes;
}

std::vector<Estimate> coverage_from(const std::vector<TrialOutcome>& outcomes, const std::vector<double>& gammas) {
    std::vector<Estimate> out;
    const auto n = static_cast<double>(outcomes.size());
    for (double gamma : gammas) {
        std::size_t hits = 0;
        for (const auto& o : outcomes) hits += o.sinr_linear > gamma ? 1 : 0;
        const double p = static_cast<double>(hits) / n;
        out.push_back({p, std::sqrt(p * (1.0 - p) / n)});
    }
    return out;
}

Estimate activated_density_from(const std::vector<TrialOutcome>& outcomes, double lambda_bs) {
    // Ratio of means: lambda * sum(active) / sum(total). Conditioning on the
    // drawn BS count removes its Poisson noise from the estimate.
    double active = 0.0;
    double total = 0.0;
    for (const auto& o : outcomes) {
        active += static_cast<double>(o.activated_bs_count);
        total += static_cast<double>(o.total_bs_count);
    }
    const auto n = static_cast<double>(outcomes.size());
    const double ratio = active / total;
    double var = 0.0;
    for (const auto& o : outcomes) {
        const double r = static_cast<double>(o.activated_bs_count) - ratio * static_cast<double>(o.total_bs_count);
        var += r * r;
    }
    const double mean_total = total / n;
    const double se = n > 1 ? std::sqrt(var / (n - 1.0) / n) / mean_total : 0.0;
    return {lambda_bs * ratio, lambda_bs * se};
}

Estimate rate_density_from(const std::vector<TrialOutcome>& outcomes, double lambda_bs, double gamma0) {
    const Estimate density = activated_density_from(outcomes, lambda_bs);
    const auto n = static_cast<double>(outcomes.size());
    double sum = 0.0;
    double sum_sq = 0.0;
    for (const auto& o : outcomes) {
        const double rate = o.sinr_linear > gamma0 ? std::log2(1.0 + o.sinr_linear) : 0.0;
        sum += rate;
        sum_sq += rate * rate;
    }
    const double mean = sum / n;
    const double var = n > 1 ? std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0)) : 0.0;
    const double se_mean = std::sqrt(var / n);
    const double value = density.value * mean;
    const double se = std::hypot(density.value * se_mean, mean * density.std_error);
    return {value, se};
}

std::vector<Estimate> estimate_coverage(const SimConfig& cfg) {
    if (cfg.trials < 100) raise(ErrorCode::InvalidArgument, "coverage estimation needs >= 100 trials");
    return coverage_from(run_trials(cfg), cfg.gamma_list);
}

Estimate estimate_activated_density(const SimConfig& cfg) {
    if (cfg.trials < 100) raise(ErrorCode::InvalidArgument, "density estimation needs >= 100 trials");
    return activated_density_from(run_trials(cfg), cfg.network.lambda_bs);
}

Estimate estimate_rate_density(const SimConfig& cfg, double gamma0) {
    if (cfg.trials < 100) raise(ErrorCode::InvalidArgument, "rate estimation needs >= 100 trials");
    return rate_density_from(run_trials(cfg), cfg.network.lambda_bs, gamma0);
}

void write_trials_csv(const std::filesystem::path& path, const SimConfig& cfg,
                      const std::vector<TrialOutcome>& outcomes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) raise(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
    out << "trial,seed,sinr_db,path,distance_km,active_bs,total_bs\n";
    char line[256];
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        const auto& o = outcomes[i];
        std::snprintf(line, sizeof line, "%zu,%llu,%.10g,%s,%.10g,%zu,%zu\n", i,
                      static_cast<unsigned long long>(trial_seed(cfg.seed, i)), linear_to_db(o.sinr_linear),
                      to_string(o.serving_path), o.serving_distance_km, o.activated_bs_count, o.total_bs_count);
        out << line;
    }
    if (!out) raise(ErrorCode::IoError, "failed writing " + path.string());
}

}  // namespace scn::mc
