//==============================================================================
// capi.cpp
// The extern-C surface. Exceptions from the core are converted to status
// codes; the message lands in a thread-local slot for hw_last_error().
//==============================================================================
#include "halfwave.h"

#include <cstring>
#include <string>

#include "halfwave/blowup_profile.hpp"
#include "halfwave/boosted.hpp"
#include "halfwave/field_io.hpp"
#include "halfwave/modulation.hpp"
#include "halfwave/report.hpp"
#include "halfwave/verify.hpp"
#include "json.hpp"

using nlohmann::ordered_json;

struct hw_grid {
    hw::GridPtr grid;
};
struct hw_field {
    hw::Field field;
};
struct hw_blocks {
    hw::ProfileBlocks blocks;
};

namespace {

thread_local std::string g_last_error;

hw_status to_status(const hw::Error& e) {
    g_last_error = e.what();
    switch (e.code()) {
        case hw::ErrorCode::invalid_argument: return HW_ERR_INVALID_ARGUMENT;
        case hw::ErrorCode::io: return HW_ERR_IO;
        case hw::ErrorCode::format: return HW_ERR_FORMAT;
        case hw::ErrorCode::numerical: return HW_ERR_NUMERICAL;
        case hw::ErrorCode::solvability: return HW_ERR_SOLVABILITY;
    }
    return HW_ERR_NUMERICAL;
}

template <typename Fn>
hw_status guarded(Fn&& fn) {
    try {
        fn();
        return HW_OK;
    } catch (const hw::Error& e) {
        return to_status(e);
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return HW_ERR_NUMERICAL;
    }
}

char* dup_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

void set_report(char** slot, const std::string& text) {
    if (slot) *slot = dup_string(text);
}

hw_status require(bool ok, const char* message) {
    if (ok) return HW_OK;
    g_last_error = message;
    return HW_ERR_INVALID_ARGUMENT;
}

}  // namespace

extern "C" {

const char* hw_version(void) { return "halfwave 1.0.0"; }

const char* hw_last_error(void) { return g_last_error.c_str(); }

void hw_string_free(char* s) { delete[] s; }

hw_status hw_grid_create(uint64_t n, double box_length, hw_grid** out) {
    if (auto st = require(out != nullptr, "grid_create: null output"); st != HW_OK) return st;
    return guarded([&] { *out = new hw_grid{hw::make_grid(n, box_length)}; });
}

void hw_grid_destroy(hw_grid* grid) { delete grid; }

uint64_t hw_grid_n(const hw_grid* grid) { return grid ? grid->grid->n() : 0; }

double hw_grid_box_length(const hw_grid* grid) {
    return grid ? grid->grid->box_length() : 0.0;
}

hw_status hw_field_load(const char* path, hw_field** out) {
    if (auto st = require(path && out, "field_load: null argument"); st != HW_OK) return st;
    return guarded([&] { *out = new hw_field{hw::load_field(path)}; });
}

hw_status hw_field_save(const hw_field* field, const char* path) {
    if (auto st = require(field && path, "field_save: null argument"); st != HW_OK) return st;
    return guarded([&] { hw::save_field(field->field, path); });
}

void hw_field_destroy(hw_field* field) { delete field; }

hw_status hw_field_grid(const hw_field* field, hw_grid** out) {
    if (auto st = require(field && out, "field_grid: null argument"); st != HW_OK) return st;
    *out = new hw_grid{field->field.grid_ptr()};
    return HW_OK;
}

hw_status hw_field_diagnostics(const hw_field* field, double out_values[6]) {
    if (auto st = require(field && out_values, "field_diagnostics: null argument");
        st != HW_OK)
        return st;
    return guarded([&] {
        const hw::Functionals fn = hw::functionals(field->field);
        const hw::Norms nn = hw::norms(field->field);
        out_values[0] = fn.mass;
        out_values[1] = fn.energy;
        out_values[2] = fn.momentum[0];
        out_values[3] = fn.momentum[1];
        out_values[4] = nn.h_half;
        out_values[5] = nn.hdot_half;
    });
}

hw_status hw_ground_state(const hw_grid* grid, double tol, int max_iter, hw_field** q_out,
                          char** report_json) {
    if (auto st = require(grid && q_out, "ground_state: null argument"); st != HW_OK)
        return st;
    return guarded([&] {
        hw::GroundStateOptions opts;
        if (tol > 0.0) opts.tol = tol;
        if (max_iter > 0) opts.max_iter = max_iter;
        const hw::GroundState gs = hw::solve_ground_state(grid->grid, opts);
        ordered_json j;
        j["kind"] = "ground-state";
        j["grid"] = {{"n", grid->grid->n()}, {"box_length", grid->grid->box_length()}};
        j["mass"] = gs.mass;
        j["energy"] = hw::functionals(gs.q).energy;
        j["residual"] = gs.residual;
        j["gn_rel_err"] = hw::gn_extremality(gs);
        j["gn_constant"] = gs.gn_constant;
        j["decay_slope"] = gs.decay_slope;
        j["iterations"] = gs.iterations;
        set_report(report_json, j.dump(2) + "\n");
        *q_out = new hw_field{gs.q};
    });
}

hw_status hw_boosted(const hw_grid* grid, double vx, double vy, double tol,
                     hw_field** q_out, char** report_json) {
    if (auto st = require(grid && q_out, "boosted: null argument"); st != HW_OK) return st;
    return guarded([&] {
        hw::BoostedOptions opts;
        if (tol > 0.0) opts.tol = tol;
        const hw::BoostedWave w = hw::solve_boosted(grid->grid, {vx, vy}, opts);
        ordered_json j;
        j["kind"] = "boosted-wave";
        j["v"] = {vx, vy};
        j["mass"] = w.mass;
        j["residual"] = w.residual;
        j["c_v"] = w.c_v;
        j["cv_mismatch"] = w.weinstein_mismatch;
        j["momentum_projection"] = w.momentum_projection;
        j["energy_v"] = w.energy_v;
        j["iterations"] = w.iterations;
        set_report(report_json, j.dump(2) + "\n");
        *q_out = new hw_field{w.q_v};
    });
}

hw_status hw_boosted_scan(const hw_grid* grid, const double* speeds, size_t count,
                          const char* csv_path, char** report_json) {
    if (auto st = require(grid && speeds && count > 0, "boosted_scan: null argument");
        st != HW_OK)
        return st;
    return guarded([&] {
        const std::vector<double> sp(speeds, speeds + count);
        const auto rows = hw::mass_curve(grid->grid, sp);
        hw::CsvWriter csv({"speed", "mass", "residual", "cv_mismatch",
                           "momentum_projection", "energy_v"});
        for (const auto& r : rows)
            csv.add_row({r.speed, r.mass, r.residual, r.cv_mismatch, r.momentum_projection,
                         r.energy_v});
        if (csv_path) csv.write(csv_path);
        ordered_json j;
        j["kind"] = "boosted-scan";
        j["rows"] = rows.size();
        bool decreasing = true;
        for (size_t i = 1; i < rows.size(); ++i)
            if (!(rows[i].mass < rows[i - 1].mass)) decreasing = false;
        j["mass_strictly_decreasing"] = decreasing;
        set_report(report_json, j.dump(2) + "\n");
    });
}

hw_status hw_blocks_build(const hw_field* q, double tol, hw_blocks** out,
                          char** report_json) {
    if (auto st = require(q && out, "blocks_build: null argument"); st != HW_OK) return st;
    return guarded([&] {
        hw::GroundState gs;
        gs.q = hw::real_part(q->field);
        gs.mass = hw::norm_l2(gs.q) * hw::norm_l2(gs.q);
        hw::BlockBuildOptions opts;
        if (tol > 0.0) opts.tol = tol;
        hw::ProfileBlocks bl = hw::build_profile_blocks(gs, opts);
        set_report(report_json, hw::blocks_manifest_json(bl));
        *out = new hw_blocks{std::move(bl)};
    });
}

hw_status hw_blocks_save(const hw_blocks* blocks, const char* dir) {
    if (auto st = require(blocks && dir, "blocks_save: null argument"); st != HW_OK)
        return st;
    return guarded([&] { hw::save_blocks(blocks->blocks, dir); });
}

hw_status hw_blocks_load(const char* dir, hw_blocks** out) {
    if (auto st = require(dir && out, "blocks_load: null argument"); st != HW_OK) return st;
    return guarded([&] { *out = new hw_blocks{hw::load_blocks(dir)}; });
}

void hw_blocks_destroy(hw_blocks* blocks) { delete blocks; }

hw_status hw_profile_assemble(const hw_blocks* blocks, double a, double b1, double b2,
                              hw_field** qp_out, char** report_json) {
    if (auto st = require(blocks && qp_out, "profile_assemble: null argument"); st != HW_OK)
        return st;
    return guarded([&] {
        hw::ProfileParams p;
        p.a = a;
        p.b = {b1, b2};
        const hw::AssembledProfile ap = hw::assemble(blocks->blocks, p);
        ordered_json j;
        j["kind"] = "assembled-profile";
        j["a"] = a;
        j["b"] = {b1, b2};
        j["phi_l2"] = ap.phi_l2;
        j["phi_h1"] = ap.phi_h1;
        j["qp_l2"] = ap.qp_l2;
        const hw::ExpansionCheck ec = hw::expansions_check(blocks->blocks, p);
        j["mass_gap"] = ec.mass_gap;
        if (a != 0.0) j["energy_coeff"] = ec.energy_coeff;
        if (b1 != 0.0 || b2 != 0.0) j["momentum_coeff"] = ec.momentum_coeff;
        set_report(report_json, j.dump(2) + "\n");
        *qp_out = new hw_field{ap.q_p};
    });
}

hw_status hw_profile_order_fit(const hw_blocks* blocks, char axis, const double* values,
                               size_t count, const char* csv_path, char** report_json) {
    if (auto st = require(blocks && values && count >= 3, "order_fit: bad arguments");
        st != HW_OK)
        return st;
    if (auto st = require(axis == 'a' || axis == 'b', "order_fit: axis must be 'a' or 'b'");
        st != HW_OK)
        return st;
    return guarded([&] {
        const std::vector<double> vals(values, values + count);
        const hw::OrderFit fit = hw::residual_order_fit(
            blocks->blocks, axis == 'a' ? hw::FitAxis::a : hw::FitAxis::b, vals);
        hw::CsvWriter csv({"value", "phi_l2"});
        for (size_t i = 0; i < fit.values.size(); ++i)
            csv.add_row({fit.values[i], fit.residuals[i]});
        if (csv_path) csv.write(csv_path);
        ordered_json j;
        j["kind"] = "order-fit";
        j["axis"] = std::string(1, axis);
        j["slope"] = fit.slope;
        j["points"] = fit.values.size();
        j["dropped_below_floor"] = fit.dropped;
        set_report(report_json, j.dump(2) + "\n");
    });
}

hw_status hw_evolve(const hw_field* u0, double dt, double t_start, double t_end,
                    int dealias, double sample_every, const char* series_csv,
                    const char* checkpoint_base, double checkpoint_every,
                    hw_field** u_final, char** report_json) {
    if (auto st = require(u0 && u_final, "evolve: null argument"); st != HW_OK) return st;
    return guarded([&] {
        hw::EvolutionConfig cfg;
        cfg.dt = dt;
        cfg.t_start = t_start;
        cfg.t_end = t_end;
        cfg.dealias = dealias != 0;
        cfg.sample_every = sample_every;
        if (checkpoint_base) cfg.checkpoint_base = checkpoint_base;
        cfg.checkpoint_every = checkpoint_every;
        const hw::EvolveResult res = hw::evolve(u0->field, cfg);

        hw::CsvWriter csv({"t", "mass", "energy", "px", "py", "h_half", "hdot_half"});
        for (const auto& s : res.series.samples)
            csv.add_row({s.t, s.mass, s.energy, s.momentum[0], s.momentum[1], s.h_half,
                         s.hdot_half});
        if (series_csv) csv.write(series_csv);

        ordered_json j;
        j["kind"] = "evolution";
        j["steps"] = res.steps;
        j["t_final"] = res.t_final;
        j["stop"] = res.stop == hw::StopReason::completed
                        ? "completed"
                        : (res.stop == hw::StopReason::blowup_floor ? "resolution-floor"
                                                                    : "nan");
        if (!res.series.samples.empty()) {
            const auto& first = res.series.samples.front();
            const auto& last = res.series.samples.back();
            j["mass_drift"] = std::abs(last.mass - first.mass) /
                              std::max(first.mass, 1e-300);
            j["energy_drift"] = std::abs(last.energy - first.energy);
        }
        set_report(report_json, j.dump(2) + "\n");
        *u_final = new hw_field{res.u};
    });
}

hw_status hw_blowup(const hw_blocks* blocks, const hw_grid* grid, double e0, double p0x,
                    double p0y, double t_init, int forward, const char* series_csv,
                    char** report_json) {
    if (auto st = require(blocks && grid, "blowup: null argument"); st != HW_OK) return st;
    return guarded([&] {
        const hw::ExperimentConstants consts =
            hw::ExperimentConstants::make(e0, {p0x, p0y}, blocks->blocks);
        hw::BlowupOptions opts;
        opts.forward = forward != 0;
        const hw::BlowupReport rep =
            hw::blowup_experiment(consts, t_init, blocks->blocks, grid->grid, opts);

        hw::CsvWriter csv({"t", "lambda", "a", "b1", "b2", "gamma", "alpha1", "alpha2",
                           "eps_l2", "hdot_half", "mass", "energy", "spectral_tail"});
        for (const auto& s : rep.snapshots)
            csv.add_row({s.t, s.state.lambda, s.state.a, s.state.b[0], s.state.b[1],
                         s.state.gamma, s.state.alpha[0], s.state.alpha[1],
                         s.state.epsilon_l2, s.hdot_half, s.mass, s.energy,
                         s.state.spectral_tail});
        if (series_csv) csv.write(series_csv);

        ordered_json j;
        j["kind"] = "blowup-experiment";
        j["A0"] = consts.a0;
        j["B0"] = {consts.b0[0], consts.b0[1]};
        j["t_init"] = t_init;
        j["direction"] = opts.forward ? "forward" : "backward";
        j["snapshots"] = rep.snapshots.size();
        j["lambda_exponent"] = rep.lambda_exponent;
        j["lambda_coefficient"] = rep.lambda_coefficient;
        j["c_times_4A0sq"] = rep.c_over_prediction;
        j["lambda_window_ratio"] = rep.lambda_ratio;
        j["a_over_sqrt_lambda_end"] = rep.a_over_sqrt_lambda_end;
        j["b_over_lambda_end"] = rep.b_over_lambda_end;
        j["eps_vs_lambda_slope"] = rep.eps_vs_lambda_slope;
        j["hdot_exponent"] = rep.hdot_exponent;
        j["stop_reason"] = rep.stop_reason;
        set_report(report_json, j.dump(2) + "\n");
    });
}

hw_status hw_verify(const char* level, uint64_t seed, int echo, const char* report_path,
                    char** report_json, int* all_pass) {
    if (auto st = require(level != nullptr, "verify: null level"); st != HW_OK) return st;
    const std::string lvl(level);
    if (auto st = require(lvl == "core" || lvl == "full", "verify: level must be core|full");
        st != HW_OK)
        return st;
    return guarded([&] {
        hw::VerifyOptions opts;
        opts.level = lvl == "core" ? hw::VerifyLevel::core : hw::VerifyLevel::full;
        opts.seed = seed;
        opts.echo = echo != 0;
        const hw::VerificationReport rep = hw::run_verification(opts);
        const std::string text = rep.to_json();
        if (report_path) hw::atomic_write_text(report_path, text);
        set_report(report_json, text);
        if (all_pass) *all_pass = rep.all_pass ? 1 : 0;
    });
}

}  // extern "C"
