#include "lvfp/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <mutex>
#include <thread>

#include "lvfp/csv.hpp"
#include "lvfp/errors.hpp"
#include "lvfp/fpsolver.hpp"
#include "lvfp/moments.hpp"

namespace lvfp {

namespace fs = std::filesystem;

namespace {

std::string out_path(const RunConfig& cfg, const std::string& name)
{
    fs::create_directories(cfg.outdir);
    return (fs::path(cfg.outdir) / name).string();
}

std::string short_number(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

std::string target_name(Target t) { return t == Target::quasi ? "quasi" : "equilibrium"; }

SystemState initial_state(const RunConfig& cfg)
{
    const GridSpec& g = cfg.solver.grid;
    return make_initial_state(cfg.model, indicator_initial(cfg.initial_means[0], g),
                              indicator_initial(cfg.initial_means[1], g));
}

std::optional<double> theory_rate_for(const RunConfig& cfg, const MetricRequest& r, Species s)
{
    double ell = 0.0;
    switch (r.kind) {
    case DistanceKind::energy_norm_ell:
    case DistanceKind::sobolev: ell = r.order; break;
    case DistanceKind::cramer_cdf:
    case DistanceKind::cramer_fourier: ell = 1.0; break;
    case DistanceKind::energy_r: ell = 0.5 * (1.0 + r.order); break;
    case DistanceKind::rel_entropy: return std::nullopt;
    }
    try {
        return energy_decay_rate(cfg.model.p, ell, asymptotic_coefficients(cfg.model).of(s));
    } catch (const std::domain_error&) {
        return std::nullopt;  // outside the lemma's validity: measured-only record
    }
}

bool is_cramer(DistanceKind k) { return k == DistanceKind::cramer_cdf || k == DistanceKind::cramer_fourier; }

double interpolate(const std::vector<double>& ts, const std::vector<double>& vs, double t)
{
    const auto it = std::lower_bound(ts.begin(), ts.end(), t);
    if (it == ts.begin())
        return vs.front();
    if (it == ts.end())
        return vs.back();
    const std::size_t k = static_cast<std::size_t>(it - ts.begin());
    const double w = (t - ts[k - 1]) / (ts[k] - ts[k - 1]);
    return (1.0 - w) * vs[k - 1] + w * vs[k];
}

}  // namespace

unsigned sweep_threads_from_env()
{
    if (const char* e = std::getenv("LVFP_THREADS")) {
        const long v = std::strtol(e, nullptr, 10);
        if (v >= 1)
            return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<std::string> cmd_moments(const RunConfig& cfg)
{
    cfg.validate();
    cfg.model.validate_admissible();
    const auto every = static_cast<std::size_t>(std::max(1.0, std::round(cfg.moments_output_interval / cfg.moments_dt)));

    std::vector<MomentTrajectory> trajs;
    for (const auto& m0 : cfg.moments_initial)
        trajs.push_back(integrate_moments(cfg.model, {0.0, m0[0], m0[1], cfg.moments_v0[0], cfg.moments_v0[1]},
                                          cfg.moments_t_end, cfg.moments_dt, every));

    const std::string path = out_path(cfg, "moments_" + cfg.tag + ".csv");
    {
        CsvWriter w(path, {"ic", "t", "m1", "m2", "v1", "v2"});
        for (std::size_t i = 0; i < trajs.size(); ++i)
            for (const auto& s : trajs[i].states)
                w.field(static_cast<long>(i)).field(s.t).field(s.m1).field(s.m2).field(s.v1).field(s.v2).end_row();
    }
    const std::string fixed = out_path(cfg, "moments_" + cfg.tag + "_fixed_point.csv");
    {
        const auto m = equilibrium_mean(cfg.model);
        const auto v = stationary_variances(cfg.model);
        CsvWriter w(fixed, {"m1", "m2", "v1", "v2"});
        w.field(m[0]).field(m[1]).field(v[0]).field(v[1]).end_row();
    }
    return {path, fixed};
}

std::vector<std::string> cmd_simulate(const RunConfig& cfg)
{
    cfg.validate();
    const GridSpec& g = cfg.solver.grid;
    std::vector<std::string> written;
    const std::string run_path = out_path(cfg, "simulate_" + cfg.tag + ".csv");
    written.push_back(run_path);
    CsvWriter run_csv(run_path, {"t", "m1", "m2", "v1", "v2", "mass1", "mass2"});
    auto record = [&](const SystemState& s) {
        run_csv.field(s.t)
            .field(s.f1.mean())
            .field(s.f2.mean())
            .field(s.f1.variance())
            .field(s.f2.variance())
            .field(s.f1.mass())
            .field(s.f2.mass())
            .end_row();
    };

    auto snapshot = [&](const SystemState& s) {
        const std::string path = out_path(cfg, "snapshot_t" + short_number(s.t) + ".csv");
        written.push_back(path);
        std::vector<std::string> header{"x", "f1", "f2"};
        DensityField q1, q2;
        if (cfg.quasi_snapshots) {
            header.insert(header.end(), {"fq1", "fq2"});
            const auto c = coefficients_from_means(cfg.model, s.f1.mean(), s.f2.mean());
            q1 = sample_on_grid(quasi_equilibrium(c, Species::prey, cfg.model.p), g);
            q2 = sample_on_grid(quasi_equilibrium(c, Species::predator, cfg.model.p), g);
        }
        CsvWriter w(path, header);
        for (std::size_t i = 0; i < s.f1.values.size(); ++i) {
            w.field(g.x(i)).field(s.f1.values[i]).field(s.f2.values[i]);
            if (cfg.quasi_snapshots)
                w.field(q1.values[i]).field(q2.values[i]);
            w.end_row();
        }
    };

    std::vector<double> stops;
    for (double t : cfg.snapshot_times)
        if (t >= 0 && t <= cfg.solver.t_end)
            stops.push_back(t);
    std::sort(stops.begin(), stops.end());
    stops.erase(std::unique(stops.begin(), stops.end()), stops.end());
    if (stops.empty() || stops.back() < cfg.solver.t_end)
        stops.push_back(cfg.solver.t_end);

    SystemState s = initial_state(cfg);
    record(s);
    const std::vector<double> snaps = cfg.snapshot_times;
    auto wants_snapshot = [&](double t) {
        return std::any_of(snaps.begin(), snaps.end(), [&](double v) { return std::abs(v - t) < 1e-12; });
    };
    if (wants_snapshot(0.0))
        snapshot(s);
    for (double stop : stops) {
        if (stop <= s.t)
            continue;
        SolverConfig seg = cfg.solver;
        seg.t_end = stop - s.t;
        bool first = true;
        s = run(cfg.model, seg, s, [&](const SystemState& st) {
            if (!first)
                record(st);
            first = false;
        });
        s.t = stop;
        if (wants_snapshot(stop))
            snapshot(s);
    }
    return written;
}

std::vector<DistanceSeries> distance_series(const RunConfig& cfg)
{
    cfg.validate();
    const GridSpec& g = cfg.solver.grid;
    const SpectralGrid sg = SpectralGrid::make(cfg.xi_min, cfg.xi_max, cfg.xi_nodes);
    const std::array<DensityField, 2> feq{sample_on_grid(equilibrium_density(cfg.model, Species::prey), g),
                                          sample_on_grid(equilibrium_density(cfg.model, Species::predator), g)};

    std::vector<DistanceSeries> series;
    for (const auto& req : cfg.metrics)
        for (Species sp : kSpecies)
            for (Target tg : {Target::quasi, Target::equilibrium}) {
                DistanceSeries ds;
                ds.request = req;
                ds.species = sp;
                ds.target = tg;
                ds.record.theory_rate = theory_rate_for(cfg, req, sp);
                series.push_back(ds);
            }

    run(cfg.model, cfg.solver, initial_state(cfg), [&](const SystemState& s) {
        const auto c = coefficients_from_means(cfg.model, s.f1.mean(), s.f2.mean());
        const std::array<DensityField, 2> fq{
            sample_on_grid(quasi_equilibrium(c, Species::prey, cfg.model.p), g),
            sample_on_grid(quasi_equilibrium(c, Species::predator, cfg.model.p), g)};
        for (auto& ds : series) {
            const int k = index_of(ds.species);
            const DensityField& target = ds.target == Target::quasi ? fq[k] : feq[k];
            ds.last = compute_distance(ds.request.kind, ds.request.order, s.f(ds.species), target, sg);
            ds.record.times.push_back(s.t);
            ds.record.values.push_back(ds.last.value);
        }
    });

    // Envelope from the moment trajectory started at the same means.
    std::optional<MomentTrajectory> traj;
    for (auto& ds : series) {
        ds.record.fit = fit_rate(ds.record.times, ds.record.values);
        if (!is_cramer(ds.request.kind) || ds.target != Target::equilibrium)
            continue;
        if (!traj) {
            const MomentState m0{0.0, cfg.initial_means[0], cfg.initial_means[1], 0.0, 0.0};
            traj = integrate_means(cfg.model, m0, cfg.solver.t_end, cfg.moments_dt);
        }
        try {
            const auto env = cramer_envelope(cfg.model, ds.species, ds.record.values.front(), *traj, g);
            for (double t : ds.record.times) {
                ds.record.envelope_duhamel.push_back(interpolate(env.times, env.duhamel, t));
                ds.record.envelope_closed.push_back(interpolate(env.times, env.closed, t));
            }
        } catch (const std::domain_error&) {
            // lambda turned nonpositive along the trajectory: no envelope
        }
    }
    return series;
}

std::vector<std::string> cmd_distances(const RunConfig& cfg)
{
    const auto series = distance_series(cfg);
    std::vector<std::string> written;
    const std::string summary = out_path(cfg, "distances_" + cfg.tag + ".csv");
    written.push_back(summary);
    CsvWriter sw(summary, {"species", "target", "kind", "order", "value", "xi_max", "nodes", "tail_bound"});
    for (const auto& ds : series) {
        sw.field(static_cast<long>(index_of(ds.species) + 1))
            .field(target_name(ds.target))
            .field(to_string(ds.last.kind))
            .field(ds.last.order)
            .field(ds.last.value)
            .field(ds.last.xi_max)
            .field(static_cast<long>(ds.last.nodes))
            .field(ds.last.tail_bound)
            .end_row();

        const std::string name = "distances_" + cfg.tag + "_" + to_string(ds.request.kind) + "_" +
                                 short_number(ds.request.order) + "_s" +
                                 std::to_string(index_of(ds.species) + 1) + "_" + target_name(ds.target) + ".csv";
        const std::string path = out_path(cfg, name);
        written.push_back(path);
        CsvWriter w(path, {"t", "measured", "envelope_duhamel", "envelope_closed", "theory_rate", "fitted_rate"});
        const auto& r = ds.record;
        const std::optional<double> fitted = r.fit ? std::optional<double>(r.fit->rate) : std::nullopt;
        for (std::size_t i = 0; i < r.times.size(); ++i) {
            w.field(r.times[i]).field(r.values[i]);
            w.field(r.envelope_duhamel.empty() ? std::nullopt : std::optional<double>(r.envelope_duhamel[i]));
            w.field(r.envelope_closed.empty() ? std::nullopt : std::optional<double>(r.envelope_closed[i]));
            w.field(r.theory_rate).field(fitted).end_row();
        }
    }
    return written;
}

std::vector<std::string> cmd_sweep(const RunConfig& cfg, unsigned threads)
{
    cfg.validate();
    struct Row {
        double value;
        std::array<double, 2> final_cramer{};
        std::array<std::optional<double>, 2> fitted, theory;
        std::string status = "ok";
    };
    std::vector<Row> rows(cfg.sweep_values.size());
    std::vector<std::string> written(cfg.sweep_values.size());

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t i = next++; i < rows.size(); i = next++) {
            Row& row = rows[i];
            row.value = cfg.sweep_values[i];
            try {
                RunConfig c = cfg;
                apply_setting(c, cfg.sweep_param, format_double(row.value));
                c.outdir = (fs::path(cfg.outdir) / ("sweep_" + cfg.tag + "_" + std::to_string(i))).string();
                c.metrics = {{DistanceKind::cramer_cdf, 1.0}};
                c.snapshot_times.clear();
                c.validate();
                const GridSpec& g = c.solver.grid;
                const std::array<DensityField, 2> feq{
                    sample_on_grid(equilibrium_density(c.model, Species::prey), g),
                    sample_on_grid(equilibrium_density(c.model, Species::predator), g)};
                std::vector<double> ts;
                std::array<std::vector<double>, 2> vs;
                const std::string run_path = out_path(c, "simulate_" + c.tag + ".csv");
                CsvWriter w(run_path, {"t", "m1", "m2", "cramer1", "cramer2"});
                run(c.model, c.solver, initial_state(c), [&](const SystemState& s) {
                    ts.push_back(s.t);
                    for (Species sp : kSpecies)
                        vs[index_of(sp)].push_back(cramer_cdf(s.f(sp), feq[index_of(sp)]));
                    w.field(s.t).field(s.f1.mean()).field(s.f2.mean()).field(vs[0].back()).field(vs[1].back()).end_row();
                });
                written[i] = run_path;
                for (Species sp : kSpecies) {
                    const int k = index_of(sp);
                    row.final_cramer[k] = vs[k].back();
                    if (const auto fit = fit_rate(ts, vs[k]))
                        row.fitted[k] = fit->rate;
                    row.theory[k] = theory_rate_for(c, {DistanceKind::cramer_cdf, 1.0}, sp);
                }
            } catch (const std::exception& e) {
                row.status = std::string("error: ") + e.what();
                std::replace(row.status.begin(), row.status.end(), ',', ';');
                std::replace(row.status.begin(), row.status.end(), '\n', ' ');
            }
        }
    };
    const unsigned n = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(rows.size())));
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < n; ++t)
        pool.emplace_back(worker);
    for (auto& t : pool)
        t.join();

    const std::string path = out_path(cfg, "sweep_" + cfg.tag + ".csv");
    CsvWriter w(path, {"param", "value", "species", "final_cramer", "fitted_rate", "theory_rate", "status"});
    for (const auto& row : rows)
        for (Species sp : kSpecies) {
            const int k = index_of(sp);
            w.field(cfg.sweep_param).field(row.value).field(static_cast<long>(k + 1));
            w.field(row.status == "ok" ? std::optional<double>(row.final_cramer[k]) : std::nullopt);
            w.field(row.fitted[k]).field(row.theory[k]).field(row.status).end_row();
        }
    std::vector<std::string> out{path};
    for (const auto& p : written)
        if (!p.empty())
            out.push_back(p);
    return out;
}

}  // namespace lvfp
