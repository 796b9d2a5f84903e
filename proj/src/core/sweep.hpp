#pragma once

#include "core/fano.hpp"
#include "core/info.hpp"
#include "core/table.hpp"

namespace qcb {

enum class TimingMode { standard, optimized };

struct SweepConfig {
    double g_min = 0.05;
    double g_max = 1.0;
    int steps = 96;                    // 0.01 spacing on the default range
    CouplingWindow window{};
    TimingMode timing = TimingMode::standard;
    Stage stage = Stage::full;
    bool rwa = false;
    bool with_q1 = false;              // Q1 needs ~10^2 propagations per point
    PropagatorConfig prop{};
    int jobs = 0;                      // 0: hardware concurrency

    void validate() const;
    std::vector<double> grid() const;  // ascending, `steps` points
    std::vector<std::pair<std::string, std::string>> meta() const;
};

// One output row. NaN marks fields that were not requested or points that
// failed (converged is then 0); a failed point never aborts the sweep.
struct SweepRecord {
    double g = 0.0;
    int n_max_used = 0;
    double ic_u = std::nan("");
    double q1 = std::nan("");
    double n_end = std::nan("");
    double n_dce = std::nan("");
    double rate = std::nan("");
    double t1 = std::nan(""), tc = std::nan(""), t2 = std::nan("");
    bool converged = false;
};

// Cutoff escalation: evaluate at n and 2n, accept n when every observable
// moves less than prop.convergence_threshold, otherwise double up to the cap.
// The reported n_max is the smallest passing one.
SweepRecord sweep_point(double g, const SweepConfig& config);

struct FanoRecord {
    double g = 0.0;
    int n_max_used = 0;
    AffineMap map;
    bool converged = false;
};

FanoRecord fano_point(double g, const SweepConfig& config);

DataTable run_sweep(const SweepConfig& config);
DataTable run_fano(const SweepConfig& config);
DataTable run_converge(double g, const SweepConfig& config, const std::vector<int>& levels);

struct DecompositionReport {
    double g = 0.0;
    int n_max_used = 0;
    bool converged = false;
    AffineMap map;
    ElementaryMaps seq;
    KrausSet kraus;
    double reconstruction_residual = 0.0;  // |compose(seq) - map|, max entry
    double completeness_defect = 0.0;      // |sum K^dag K - I|, max entry
    double kraus_vs_affine = 0.0;          // action mismatch over 20 probe vectors
};

DecompositionReport run_decompose(double g, const SweepConfig& config);

std::string decomposition_text(const DecompositionReport& rep);
std::string decomposition_json(const DecompositionReport& rep);

// Deterministic gather: f(i) runs on a worker pool, results land by index.
void parallel_for_indexed(int n, int jobs, const std::function<void(int)>& f);

} // namespace qcb
