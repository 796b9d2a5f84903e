#include "core/sweep.hpp"

#include <atomic>
#include <cmath>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "core/version.hpp"

namespace qcb {

void SweepConfig::validate() const {
    if (!(g_min > 0.0) || g_min > g_max) fail_invalid("sweep: need 0 < g_min <= g_max");
    if (steps < 1) fail_invalid("sweep: steps must be >= 1");
    window.validate();
    prop.validate();
    if (timing == TimingMode::optimized && stage != Stage::full)
        fail_invalid("sweep: timing optimization is defined for the full stage");
}

std::vector<double> SweepConfig::grid() const {
    std::vector<double> g(steps);
    if (steps == 1) {
        g[0] = g_min;
        return g;
    }
    const double h = (g_max - g_min) / (steps - 1);
    for (int i = 0; i < steps; ++i) g[i] = g_min + h * i;
    return g;
}

namespace {

const char* stage_cli_name(Stage s) {
    switch (s) {
        case Stage::full: return "full";
        case Stage::e1_only: return "e1";
        case Stage::e2_only: return "e2";
    }
    return "?";
}

} // namespace

std::vector<std::pair<std::string, std::string>> SweepConfig::meta() const {
    const char* protocol =
        (timing == TimingMode::optimized) ? "p2" : (window.xi > 0.0 ? "p1" : "p0");
    std::vector<std::pair<std::string, std::string>> m;
    m.emplace_back("g_min", format_g17(g_min));
    m.emplace_back("g_max", format_g17(g_max));
    m.emplace_back("steps", std::to_string(steps));
    m.emplace_back("protocol", protocol);
    m.emplace_back("window", window.family == WindowFamily::hamming ? "hamming" : "rect");
    m.emplace_back("xi", format_g17(window.xi));
    m.emplace_back("stage", stage_cli_name(stage));
    m.emplace_back("rwa", rwa ? "1" : "0");
    m.emplace_back("q1", with_q1 ? "1" : "0");
    m.emplace_back("n_max", std::to_string(prop.n_max));
    m.emplace_back("n_max_cap", std::to_string(prop.n_max_cap));
    m.emplace_back("tol", format_g17(prop.tol));
    m.emplace_back("convergence_threshold", format_g17(prop.convergence_threshold));
    return m;
}

void parallel_for_indexed(int n, int jobs, const std::function<void(int)>& f) {
    if (jobs <= 0) jobs = static_cast<int>(std::thread::hardware_concurrency());
    jobs = std::max(1, std::min(jobs, n));
    if (jobs == 1) {
        for (int i = 0; i < n; ++i) f(i);
        return;
    }
    std::atomic<int> next{0};
    std::mutex err_mutex;
    std::exception_ptr first_error;
    auto worker = [&] {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= n) return;
            try {
                f(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

namespace {

struct PointObs {
    double ic = std::nan("");
    double n_end = std::nan("");
    double n_dce = std::nan("");
    BlochVector bloch{};
    bool qubit_out = true;
};

double obs_distance(const PointObs& a, const PointObs& b) {
    double d = std::max(std::abs(a.ic - b.ic), std::abs(a.n_end - b.n_end));
    d = std::max(d, std::abs(a.n_dce - b.n_dce));
    if (a.qubit_out && b.qubit_out) {
        d = std::max(d, std::abs(a.bloch.x - b.bloch.x));
        d = std::max(d, std::abs(a.bloch.y - b.bloch.y));
        d = std::max(d, std::abs(a.bloch.z - b.bloch.z));
    }
    return d;
}

ProtocolSchedule point_schedule(double g, const SweepConfig& cfg) {
    return standard_schedule(g, cfg.window, cfg.stage);
}

// Observables of one protocol execution at a fixed cutoff. For the E2 stage
// the channel input is the cavity state that E1's output leaves behind at
// the same g (the bus pipeline the stage analysis dissects).
PointObs eval_obs(double g, const SweepConfig& cfg, const ProtocolSchedule& sched, int n_max) {
    const ModelParams params{1.0, g, cfg.rwa};
    const PropagatorConfig prop = cfg.prop.at_cutoff(n_max);

    Mat rho_in;
    if (cfg.stage == Stage::e2_only) {
        ProtocolSchedule e1 = sched;
        e1.stage = Stage::e1_only;
        const PureState after_e1 =
            run_protocol(0.5 * Mat::Identity(2, 2), params, e1, prop);
        rho_in = partial_trace(after_e1, {Sub::cavity}).rho;
    } else {
        rho_in = 0.5 * Mat::Identity(2, 2);
    }

    const PureState final = run_protocol(rho_in, params, sched, prop);
    const Sub out = stage_output(sched.stage);
    const DensityMatrix rho_out = partial_trace(final, {out});
    const DensityMatrix rho_joint = partial_trace(final, {Sub::ref, out});

    PointObs obs;
    obs.ic = entropy_bits(rho_out.rho) - entropy_bits(rho_joint.rho);
    obs.n_end = mean_photon_number(final);
    obs.qubit_out = (out != Sub::cavity);
    if (obs.qubit_out) obs.bloch = bloch_of(rho_out.rho);

    ProtocolSchedule dce = sched;
    dce.stage = Stage::e1_only;
    obs.n_dce = dce_photons(params, dce, prop, DceObservable::pure_dce);
    return obs;
}

struct ConvergedPoint {
    PointObs obs;
    int n_max = 0;
    bool converged = false;
};

ConvergedPoint converge_point(double g, const SweepConfig& cfg, const ProtocolSchedule& sched) {
    int n = cfg.prop.n_max;
    PointObs obs = eval_obs(g, cfg, sched, n);
    while (2 * n <= cfg.prop.n_max_cap) {
        const PointObs finer = eval_obs(g, cfg, sched, 2 * n);
        if (obs_distance(obs, finer) < cfg.prop.convergence_threshold)
            return {obs, n, true};
        n *= 2;
        obs = finer;
    }
    return {obs, n, false};
}

} // namespace

SweepRecord sweep_point(double g, const SweepConfig& cfg) {
    SweepRecord rec;
    rec.g = g;

    ProtocolSchedule sched = point_schedule(g, cfg);
    ConvergedPoint pt = converge_point(g, cfg, sched);
    rec.converged = pt.converged;

    if (cfg.timing == TimingMode::optimized) {
        const ModelParams params{1.0, g, cfg.rwa};
        const PropagatorConfig prop = cfg.prop.at_cutoff(pt.n_max);
        const TimingResult opt = optimize_timing(params, prop, cfg.window);
        sched = schedule_from_candidate(opt.timing, g, cfg.window);
        pt.obs = eval_obs(g, cfg, sched, pt.n_max);
        rec.converged = rec.converged && opt.converged;
        // one-shot cutoff check of the optimized value
        if (2 * pt.n_max <= cfg.prop.n_max_cap) {
            const PointObs finer = eval_obs(g, cfg, sched, 2 * pt.n_max);
            rec.converged =
                rec.converged && obs_distance(pt.obs, finer) < cfg.prop.convergence_threshold;
        }
    }

    rec.n_max_used = pt.n_max;
    rec.ic_u = pt.obs.ic;
    rec.n_end = pt.obs.n_end;
    rec.n_dce = pt.obs.n_dce;
    if (cfg.stage == Stage::full) {
        rec.t1 = sched.t1;
        rec.tc = sched.tc;
        rec.t2 = sched.t2;
    } else if (cfg.stage == Stage::e1_only) {
        rec.t1 = sched.t1;
        rec.tc = 0.0;
        rec.t2 = 0.0;
    } else {
        rec.t1 = 0.0;
        rec.tc = 0.0;
        rec.t2 = sched.t2;
    }
    rec.rate = rec.ic_u / (rec.t1 + rec.tc + rec.t2);

    if (cfg.with_q1 && cfg.stage != Stage::e2_only) {
        const ModelParams params{1.0, g, cfg.rwa};
        const Q1Result q = q1_optimize(params, sched, cfg.prop.at_cutoff(pt.n_max));
        rec.q1 = q.q1;
        rec.converged = rec.converged && q.converged;
    }
    return rec;
}

FanoRecord fano_point(double g, const SweepConfig& cfg) {
    FanoRecord rec;
    rec.g = g;
    const ModelParams params{1.0, g, cfg.rwa};
    const ProtocolSchedule sched = standard_schedule(g, cfg.window, Stage::full);

    int n = cfg.prop.n_max;
    AffineMap map = tomography(params, sched, cfg.prop.at_cutoff(n));
    const auto dist = [](const AffineMap& a, const AffineMap& b) {
        return std::max((a.m - b.m).cwiseAbs().maxCoeff(), (a.a - b.a).cwiseAbs().maxCoeff());
    };
    while (2 * n <= cfg.prop.n_max_cap) {
        const AffineMap finer = tomography(params, sched, cfg.prop.at_cutoff(2 * n));
        if (dist(map, finer) < cfg.prop.convergence_threshold) {
            rec.converged = true;
            break;
        }
        n *= 2;
        map = finer;
    }
    rec.n_max_used = n;
    rec.map = map;
    return rec;
}

namespace {

std::vector<double> sweep_row(const SweepRecord& r) {
    return {r.g,   static_cast<double>(r.n_max_used),
            r.ic_u, r.q1,  r.n_end, r.n_dce, r.rate,
            r.t1,  r.tc,  r.t2,    r.converged ? 1.0 : 0.0};
}

} // namespace

DataTable run_sweep(const SweepConfig& cfg) {
    cfg.validate();
    const auto grid = cfg.grid();
    std::vector<SweepRecord> recs(grid.size());
    parallel_for_indexed(static_cast<int>(grid.size()), cfg.jobs, [&](int i) {
        try {
            recs[i] = sweep_point(grid[i], cfg);
        } catch (const Error&) {
            recs[i] = SweepRecord{};  // failed point: NaNs, converged = 0
            recs[i].g = grid[i];
        }
    });

    DataTable t;
    t.schema = "sweep";
    t.meta = cfg.meta();
    t.columns = {"g", "n_max", "Ic_u", "Q1", "n_end", "n_dce", "rate", "T1", "Tc", "T2",
                 "converged"};
    for (const auto& r : recs) t.rows.push_back(sweep_row(r));
    return t;
}

DataTable run_fano(const SweepConfig& cfg) {
    cfg.validate();
    if (cfg.timing != TimingMode::standard || cfg.window.family != WindowFamily::rectangular)
        fail_invalid("fano: defined for standard timing and rectangular windows");
    const auto grid = cfg.grid();
    std::vector<FanoRecord> recs(grid.size());
    std::vector<char> failed(grid.size(), 0);
    parallel_for_indexed(static_cast<int>(grid.size()), cfg.jobs, [&](int i) {
        try {
            recs[i] = fano_point(grid[i], cfg);
        } catch (const Error&) {
            recs[i] = FanoRecord{};
            recs[i].g = grid[i];
            failed[i] = 1;
        }
    });

    DataTable t;
    t.schema = "fano";
    t.meta = cfg.meta();
    t.columns = {"g",       "n_max",   "m_xx",    "m_xy",    "m_yx",   "m_yy",  "m_zz", "a_z",
                 "res_mxz", "res_mzx", "res_myz", "res_mzy", "res_ax", "res_ay", "converged"};
    for (size_t i = 0; i < recs.size(); ++i) {
        const auto& r = recs[i];
        const auto res = structural_residuals(r.map);
        std::vector<double> row{r.g,
                                static_cast<double>(r.n_max_used),
                                r.map.m(0, 0),
                                r.map.m(0, 1),
                                r.map.m(1, 0),
                                r.map.m(1, 1),
                                r.map.m(2, 2),
                                r.map.a(2),
                                res(0),
                                res(1),
                                res(2),
                                res(3),
                                res(4),
                                res(5),
                                r.converged ? 1.0 : 0.0};
        if (failed[i])
            for (size_t c = 2; c + 1 < row.size(); ++c) row[c] = std::nan("");
        t.rows.push_back(std::move(row));
    }
    return t;
}

DataTable run_converge(double g, const SweepConfig& cfg, const std::vector<int>& levels) {
    cfg.validate();
    if (levels.empty()) fail_invalid("converge: no cutoff levels");
    const ProtocolSchedule sched = point_schedule(g, cfg);

    DataTable t;
    t.schema = "converge";
    t.meta = cfg.meta();
    t.meta.emplace_back("g", format_g17(g));
    t.columns = {"n_max", "Ic_u", "n_dce", "dIc_u", "dn_dce"};

    std::vector<PointObs> obs(levels.size());
    for (size_t i = 0; i < levels.size(); ++i) obs[i] = eval_obs(g, cfg, sched, levels[i]);

    int recommended = -1;
    for (size_t i = 0; i < levels.size(); ++i) {
        double dic = std::nan(""), dn = std::nan("");
        if (i > 0) {
            dic = std::abs(obs[i].ic - obs[i - 1].ic);
            dn = std::abs(obs[i].n_dce - obs[i - 1].n_dce);
            if (recommended < 0 && std::max(dic, dn) < cfg.prop.convergence_threshold)
                recommended = levels[i - 1];
        }
        t.rows.push_back({static_cast<double>(levels[i]), obs[i].ic, obs[i].n_dce, dic, dn});
    }
    t.meta.emplace_back("recommended_n_max",
                        recommended > 0 ? std::to_string(recommended) : "none");
    return t;
}

DecompositionReport run_decompose(double g, const SweepConfig& cfg) {
    cfg.validate();
    DecompositionReport rep;
    const FanoRecord fr = fano_point(g, cfg);
    rep.g = g;
    rep.n_max_used = fr.n_max_used;
    rep.converged = fr.converged;
    rep.map = fr.map;
    rep.seq = elementary_sequence(fr.map);
    rep.kraus = kraus_from_sequence(rep.seq);

    const AffineMap back = compose(rep.seq);
    rep.reconstruction_residual = std::max((back.m - fr.map.m).cwiseAbs().maxCoeff(),
                                           (back.a - fr.map.a).cwiseAbs().maxCoeff());
    rep.completeness_defect = kraus_completeness_defect(rep.kraus);

    double worst = 0.0;
    for (const BlochVector& r : probe_bloch_vectors(20)) {
        const Mat via_affine = apply_affine(fr.map, {dm_from_bloch(r), Layout{{Sub::qubit1, 2}}}).rho;
        const Mat via_kraus = kraus_apply(rep.kraus, dm_from_bloch(r));
        worst = std::max(worst, (via_affine - via_kraus).cwiseAbs().maxCoeff());
    }
    rep.kraus_vs_affine = worst;
    return rep;
}

std::string decomposition_text(const DecompositionReport& rep) {
    std::ostringstream os;
    os << "channel decomposition at g = " << format_g17(rep.g) << "\n";
    os << "  n_max = " << rep.n_max_used << (rep.converged ? "" : "  (unconverged)") << "\n";
    os << "  affine map (row-major M | a):\n";
    for (int i = 0; i < 3; ++i)
        os << "    " << format_g17(rep.map.m(i, 0)) << " " << format_g17(rep.map.m(i, 1)) << " "
           << format_g17(rep.map.m(i, 2)) << " | " << format_g17(rep.map.a(i)) << "\n";
    os << "  displacement: theta = " << format_g17(rep.seq.m1.theta) << ", direction "
       << (rep.seq.m1.direction >= 0 ? "+z" : "-z") << "\n";
    os << "  rotation M2 angle = " << format_g17(rep.seq.rot2) << "\n";
    os << "  scaling  M3 diag  = " << format_g17(rep.seq.scale(0)) << " "
       << format_g17(rep.seq.scale(1)) << " " << format_g17(rep.seq.scale(2)) << "\n";
    os << "  rotation M4 angle = " << format_g17(rep.seq.rot4) << "\n";
    os << "  kraus operators (" << rep.kraus.size() << "):\n";
    for (const auto& k : rep.kraus) {
        os << "    [";
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                os << " (" << format_g17(k(i, j).real()) << "," << format_g17(k(i, j).imag())
                   << ")";
        os << " ]\n";
    }
    os << "  reconstruction residual = " << format_g17(rep.reconstruction_residual) << "\n";
    os << "  kraus completeness defect = " << format_g17(rep.completeness_defect) << "\n";
    os << "  kraus vs affine action    = " << format_g17(rep.kraus_vs_affine) << "\n";
    return os.str();
}

std::string decomposition_json(const DecompositionReport& rep) {
    nlohmann::ordered_json j;
    j["qcbus"] = version_string;
    j["g"] = rep.g;
    j["n_max"] = rep.n_max_used;
    j["converged"] = rep.converged;
    j["M"] = {{rep.map.m(0, 0), rep.map.m(0, 1), rep.map.m(0, 2)},
              {rep.map.m(1, 0), rep.map.m(1, 1), rep.map.m(1, 2)},
              {rep.map.m(2, 0), rep.map.m(2, 1), rep.map.m(2, 2)}};
    j["a"] = {rep.map.a(0), rep.map.a(1), rep.map.a(2)};
    j["displacement"] = {{"theta", rep.seq.m1.theta}, {"direction", rep.seq.m1.direction}};
    j["rotation_m2"] = rep.seq.rot2;
    j["scaling_m3"] = {rep.seq.scale(0), rep.seq.scale(1), rep.seq.scale(2)};
    j["rotation_m4"] = rep.seq.rot4;
    nlohmann::ordered_json ks = nlohmann::ordered_json::array();
    for (const auto& k : rep.kraus) {
        nlohmann::ordered_json op = nlohmann::ordered_json::array();
        for (int i = 0; i < 2; ++i)
            for (int j2 = 0; j2 < 2; ++j2)
                op.push_back({k(i, j2).real(), k(i, j2).imag()});
        ks.push_back(op);
    }
    j["kraus"] = ks;
    j["reconstruction_residual"] = rep.reconstruction_residual;
    j["kraus_completeness_defect"] = rep.completeness_defect;
    j["kraus_vs_affine"] = rep.kraus_vs_affine;
    return j.dump(2) + "\n";
}

} // namespace qcb
