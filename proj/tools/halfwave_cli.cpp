//==============================================================================
// halfwave_cli.cpp
// Command-line front end. Talks to the library exclusively through the C API
// in halfwave.h. Exit codes: 0 success, 1 verification-check failure,
// 2 usage/IO error, 3 numerical failure.
//==============================================================================
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "halfwave.h"

namespace {

int status_to_exit(hw_status st) {
    switch (st) {
        case HW_OK: return 0;
        case HW_ERR_INVALID_ARGUMENT:
        case HW_ERR_IO:
        case HW_ERR_FORMAT: return 2;
        case HW_ERR_NUMERICAL:
        case HW_ERR_SOLVABILITY: return 3;
    }
    return 3;
}

int fail_with(hw_status st, const char* command) {
    std::fprintf(stderr, "{\"error\": {\"command\": \"%s\", \"status\": %d, \"message\": \"%s\"}}\n",
                 command, static_cast<int>(st), hw_last_error());
    return status_to_exit(st);
}

// temp + rename so partially written reports never land under the final name
bool write_text_atomic(const std::string& path, const char* text) {
    const std::string tmp = path + ".tmp";
    std::FILE* f = std::fopen(tmp.c_str(), "wb");
    if (!f) return false;
    const bool ok = std::fputs(text, f) >= 0;
    std::fclose(f);
    if (!ok) return false;
    return std::rename(tmp.c_str(), path.c_str()) == 0;
}

bool emit_report(const std::string& path, char* json, const char* command) {
    bool ok = true;
    if (!path.empty() && json) {
        ok = write_text_atomic(path, json);
        if (!ok) std::fprintf(stderr, "%s: cannot write report %s\n", command, path.c_str());
    }
    if (json) {
        std::fputs(json, stdout);
        hw_string_free(json);
    }
    return ok;
}

std::vector<double> parse_range(const std::string& text, bool* ok) {
    // "lo:hi:step", "lo:hi:geometric" or "lo:hi:geometric:count"
    std::vector<double> out;
    *ok = false;
    std::vector<std::string> parts;
    std::string cur;
    for (char c : text) {
        if (c == ':') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);
    if (parts.size() < 3) return out;
    char* end = nullptr;
    const double lo = std::strtod(parts[0].c_str(), &end);
    const double hi = std::strtod(parts[1].c_str(), &end);
    if (!(lo > 0.0) || !(hi > lo)) return out;
    if (parts[2] == "geometric") {
        std::size_t count = 7;
        if (parts.size() >= 4) count = static_cast<std::size_t>(std::strtoul(parts[3].c_str(), &end, 10));
        if (count < 3) return out;
        const double ratio = std::pow(hi / lo, 1.0 / static_cast<double>(count - 1));
        double v = lo;
        for (std::size_t i = 0; i < count; ++i) {
            out.push_back(v);
            v *= ratio;
        }
    } else {
        const double step = std::strtod(parts[2].c_str(), &end);
        if (!(step > 0.0)) return out;
        for (double v = lo; v <= hi + 0.5 * step; v += step) out.push_back(v);
    }
    *ok = !out.empty();
    return out;
}

struct GridArgs {
    std::uint64_t n = 128;
    double box = 40.0;
};

void add_grid_options(CLI::App* cmd, GridArgs& g) {
    cmd->add_option("--n", g.n, "points per axis (power of two)")->capture_default_str();
    cmd->add_option("--box", g.box, "box side length")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pseudospectral laboratory for the 2D mass-critical half-wave equation"};
    app.require_subcommand(1);
    app.set_config("--config", "", "read options from a TOML-style config file");
    app.failure_message(CLI::FailureMessage::simple);

    // ground-state
    auto* gs_cmd = app.add_subcommand("ground-state", "compute the ground state profile");
    GridArgs gs_grid;
    add_grid_options(gs_cmd, gs_grid);
    double gs_tol = 1e-9;
    int gs_max_iter = 2000;
    std::string gs_out, gs_report;
    gs_cmd->add_option("--tol", gs_tol)->capture_default_str();
    gs_cmd->add_option("--max-iter", gs_max_iter)->capture_default_str();
    gs_cmd->add_option("--out", gs_out, "output field (HWF1)");
    gs_cmd->add_option("--report", gs_report, "JSON report path");

    // boosted
    auto* bo_cmd = app.add_subcommand("boosted", "compute one traveling-wave profile");
    GridArgs bo_grid;
    bo_grid.n = 256;
    bo_grid.box = 60.0;
    add_grid_options(bo_cmd, bo_grid);
    double bo_v = 0.5, bo_tol = 1e-9;
    std::string bo_axis = "x", bo_out, bo_report;
    bo_cmd->add_option("--v", bo_v, "speed in (0, 1)")->required();
    bo_cmd->add_option("--axis", bo_axis, "x or y")->capture_default_str();
    bo_cmd->add_option("--tol", bo_tol)->capture_default_str();
    bo_cmd->add_option("--out", bo_out, "output field (HWF1)");
    bo_cmd->add_option("--report", bo_report, "JSON report path");

    // boosted-scan
    auto* sc_cmd = app.add_subcommand("boosted-scan", "mass curve over a range of speeds");
    GridArgs sc_grid;
    sc_grid.n = 256;
    sc_grid.box = 60.0;
    add_grid_options(sc_cmd, sc_grid);
    std::string sc_speeds = "0.1:0.9:0.1", sc_csv, sc_report;
    sc_cmd->add_option("--speeds", sc_speeds, "lo:hi:step")->capture_default_str();
    sc_cmd->add_option("--csv", sc_csv, "CSV output path")->required();
    sc_cmd->add_option("--report", sc_report, "JSON report path");

    // profile-blocks
    auto* pb_cmd = app.add_subcommand("profile-blocks", "build the correction blocks");
    std::string pb_q, pb_out, pb_report;
    double pb_tol = 1e-10;
    pb_cmd->add_option("--q", pb_q, "ground-state field (HWF1)")->required();
    pb_cmd->add_option("--out", pb_out, "output directory")->required();
    pb_cmd->add_option("--tol", pb_tol)->capture_default_str();
    pb_cmd->add_option("--report", pb_report, "JSON report path");

    // profile
    auto* pr_cmd = app.add_subcommand("profile", "assemble the approximate blowup profile");
    std::string pr_blocks, pr_out, pr_report;
    double pr_a = 0.05;
    std::vector<double> pr_b{0.0, 0.0};
    pr_cmd->add_option("--blocks", pr_blocks, "blocks directory")->required();
    pr_cmd->add_option("--a", pr_a)->capture_default_str();
    pr_cmd->add_option("--b", pr_b, "two components")->expected(2);
    pr_cmd->add_option("--out", pr_out, "output field (HWF1)");
    pr_cmd->add_option("--report", pr_report, "JSON report path");

    // profile-orderfit
    auto* of_cmd = app.add_subcommand("profile-orderfit", "residual scaling-law fit");
    std::string of_blocks, of_axis = "a", of_values = "0.02:0.16:geometric", of_csv,
                of_report;
    of_cmd->add_option("--blocks", of_blocks, "blocks directory")->required();
    of_cmd->add_option("--axis", of_axis, "a or b")->capture_default_str();
    of_cmd->add_option("--values", of_values, "lo:hi:step or lo:hi:geometric[:count]")
        ->capture_default_str();
    of_cmd->add_option("--csv", of_csv, "CSV output path")->required();
    of_cmd->add_option("--report", of_report, "JSON report path");

    // evolve
    auto* ev_cmd = app.add_subcommand("evolve", "integrate the equation in time");
    std::string ev_in, ev_series, ev_checkpoint_base = "checkpoint", ev_out, ev_report;
    double ev_dt = 1e-3, ev_t0 = 0.0, ev_t1 = 3.0, ev_sample = 0.0, ev_ckpt_every = 0.0;
    bool ev_dealias = false;
    ev_cmd->add_option("--in", ev_in, "initial field (HWF1)")->required();
    ev_cmd->add_option("--dt", ev_dt)->capture_default_str();
    ev_cmd->add_option("--t0", ev_t0)->capture_default_str();
    ev_cmd->add_option("--t1", ev_t1)->capture_default_str();
    ev_cmd->add_option("--series", ev_series, "CSV time series path");
    ev_cmd->add_option("--sample-every", ev_sample, "series cadence (0: every step)")
        ->capture_default_str();
    ev_cmd->add_option("--checkpoint-every", ev_ckpt_every)->capture_default_str();
    ev_cmd->add_option("--checkpoint-base", ev_checkpoint_base)->capture_default_str();
    ev_cmd->add_flag("--dealias", ev_dealias, "apply the 2/3-rule mask");
    ev_cmd->add_option("--out", ev_out, "final field (HWF1)");
    ev_cmd->add_option("--report", ev_report, "JSON report path");

    // blowup
    auto* bu_cmd = app.add_subcommand("blowup", "minimal-mass blowup experiment");
    GridArgs bu_grid;
    bu_grid.n = 512;
    bu_grid.box = 8.0;
    add_grid_options(bu_cmd, bu_grid);
    std::string bu_blocks, bu_series, bu_report;
    double bu_e0 = 1.0, bu_t_init = -0.8;
    std::vector<double> bu_p0{0.0, 0.0};
    bool bu_forward = false;
    bu_cmd->add_option("--blocks", bu_blocks, "blocks directory")->required();
    bu_cmd->add_option("--E0", bu_e0, "target energy")->capture_default_str();
    bu_cmd->add_option("--P0", bu_p0, "target momentum (two components)")->expected(2);
    bu_cmd->add_option("--t-init", bu_t_init, "negative initial time")->capture_default_str();
    bu_cmd->add_flag("--forward", bu_forward, "march toward the blowup time instead of away");
    bu_cmd->add_option("--series", bu_series, "CSV series path");
    bu_cmd->add_option("--report", bu_report, "JSON report path");

    // verify
    auto* ve_cmd = app.add_subcommand("verify", "run the verification suite");
    std::string ve_suite = "core", ve_report;
    std::uint64_t ve_seed = 20240817;
    bool ve_echo = false;
    ve_cmd->add_option("--suite", ve_suite, "core or full")->capture_default_str();
    ve_cmd->add_option("--report", ve_report, "JSON report path");
    ve_cmd->add_option("--seed", ve_seed)->capture_default_str();
    ve_cmd->add_flag("--echo", ve_echo, "print each check as it completes");

    // info
    auto* in_cmd = app.add_subcommand("info", "library and defaults summary");

    CLI11_PARSE(app, argc, argv);

    if (gs_cmd->parsed()) {
        hw_grid* grid = nullptr;
        if (hw_status st = hw_grid_create(gs_grid.n, gs_grid.box, &grid); st != HW_OK)
            return fail_with(st, "ground-state");
        hw_field* q = nullptr;
        char* json = nullptr;
        const hw_status st = hw_ground_state(grid, gs_tol, gs_max_iter, &q, &json);
        hw_grid_destroy(grid);
        if (st != HW_OK) return fail_with(st, "ground-state");
        if (!gs_out.empty())
            if (hw_status s2 = hw_field_save(q, gs_out.c_str()); s2 != HW_OK) {
                hw_field_destroy(q);
                return fail_with(s2, "ground-state");
            }
        hw_field_destroy(q);
        return emit_report(gs_report, json, "ground-state") ? 0 : 2;
    }

    if (bo_cmd->parsed()) {
        if (bo_axis != "x" && bo_axis != "y") {
            std::fprintf(stderr, "boosted: --axis must be x or y\n");
            return 2;
        }
        hw_grid* grid = nullptr;
        if (hw_status st = hw_grid_create(bo_grid.n, bo_grid.box, &grid); st != HW_OK)
            return fail_with(st, "boosted");
        const double vx = bo_axis == "x" ? bo_v : 0.0;
        const double vy = bo_axis == "y" ? bo_v : 0.0;
        hw_field* qv = nullptr;
        char* json = nullptr;
        const hw_status st = hw_boosted(grid, vx, vy, bo_tol, &qv, &json);
        hw_grid_destroy(grid);
        if (st != HW_OK) return fail_with(st, "boosted");
        if (!bo_out.empty())
            if (hw_status s2 = hw_field_save(qv, bo_out.c_str()); s2 != HW_OK) {
                hw_field_destroy(qv);
                return fail_with(s2, "boosted");
            }
        hw_field_destroy(qv);
        return emit_report(bo_report, json, "boosted") ? 0 : 2;
    }

    if (sc_cmd->parsed()) {
        bool ok = false;
        const std::vector<double> speeds = parse_range(sc_speeds, &ok);
        if (!ok) {
            std::fprintf(stderr, "boosted-scan: cannot parse --speeds %s\n",
                         sc_speeds.c_str());
            return 2;
        }
        hw_grid* grid = nullptr;
        if (hw_status st = hw_grid_create(sc_grid.n, sc_grid.box, &grid); st != HW_OK)
            return fail_with(st, "boosted-scan");
        char* json = nullptr;
        const hw_status st =
            hw_boosted_scan(grid, speeds.data(), speeds.size(), sc_csv.c_str(), &json);
        hw_grid_destroy(grid);
        if (st != HW_OK) return fail_with(st, "boosted-scan");
        return emit_report(sc_report, json, "boosted-scan") ? 0 : 2;
    }

    if (pb_cmd->parsed()) {
        hw_field* q = nullptr;
        if (hw_status st = hw_field_load(pb_q.c_str(), &q); st != HW_OK)
            return fail_with(st, "profile-blocks");
        hw_blocks* blocks = nullptr;
        char* json = nullptr;
        hw_status st = hw_blocks_build(q, pb_tol, &blocks, &json);
        hw_field_destroy(q);
        if (st != HW_OK) return fail_with(st, "profile-blocks");
        st = hw_blocks_save(blocks, pb_out.c_str());
        hw_blocks_destroy(blocks);
        if (st != HW_OK) {
            hw_string_free(json);
            return fail_with(st, "profile-blocks");
        }
        return emit_report(pb_report, json, "profile-blocks") ? 0 : 2;
    }

    if (pr_cmd->parsed()) {
        hw_blocks* blocks = nullptr;
        if (hw_status st = hw_blocks_load(pr_blocks.c_str(), &blocks); st != HW_OK)
            return fail_with(st, "profile");
        hw_field* qp = nullptr;
        char* json = nullptr;
        const hw_status st =
            hw_profile_assemble(blocks, pr_a, pr_b[0], pr_b[1], &qp, &json);
        hw_blocks_destroy(blocks);
        if (st != HW_OK) return fail_with(st, "profile");
        if (!pr_out.empty())
            if (hw_status s2 = hw_field_save(qp, pr_out.c_str()); s2 != HW_OK) {
                hw_field_destroy(qp);
                return fail_with(s2, "profile");
            }
        hw_field_destroy(qp);
        return emit_report(pr_report, json, "profile") ? 0 : 2;
    }

    if (of_cmd->parsed()) {
        bool ok = false;
        const std::vector<double> values = parse_range(of_values, &ok);
        if (!ok || (of_axis != "a" && of_axis != "b")) {
            std::fprintf(stderr, "profile-orderfit: bad --values or --axis\n");
            return 2;
        }
        hw_blocks* blocks = nullptr;
        if (hw_status st = hw_blocks_load(of_blocks.c_str(), &blocks); st != HW_OK)
            return fail_with(st, "profile-orderfit");
        char* json = nullptr;
        const hw_status st = hw_profile_order_fit(blocks, of_axis[0], values.data(),
                                                  values.size(), of_csv.c_str(), &json);
        hw_blocks_destroy(blocks);
        if (st != HW_OK) return fail_with(st, "profile-orderfit");
        return emit_report(of_report, json, "profile-orderfit") ? 0 : 2;
    }

    if (ev_cmd->parsed()) {
        hw_field* u0 = nullptr;
        if (hw_status st = hw_field_load(ev_in.c_str(), &u0); st != HW_OK)
            return fail_with(st, "evolve");
        hw_field* u1 = nullptr;
        char* json = nullptr;
        const hw_status st = hw_evolve(
            u0, ev_dt, ev_t0, ev_t1, ev_dealias ? 1 : 0, ev_sample,
            ev_series.empty() ? nullptr : ev_series.c_str(),
            ev_ckpt_every > 0.0 ? ev_checkpoint_base.c_str() : nullptr, ev_ckpt_every,
            &u1, &json);
        hw_field_destroy(u0);
        if (st != HW_OK) return fail_with(st, "evolve");
        if (!ev_out.empty())
            if (hw_status s2 = hw_field_save(u1, ev_out.c_str()); s2 != HW_OK) {
                hw_field_destroy(u1);
                return fail_with(s2, "evolve");
            }
        hw_field_destroy(u1);
        return emit_report(ev_report, json, "evolve") ? 0 : 2;
    }

    if (bu_cmd->parsed()) {
        hw_blocks* blocks = nullptr;
        if (hw_status st = hw_blocks_load(bu_blocks.c_str(), &blocks); st != HW_OK)
            return fail_with(st, "blowup");
        hw_grid* grid = nullptr;
        if (hw_status st = hw_grid_create(bu_grid.n, bu_grid.box, &grid); st != HW_OK) {
            hw_blocks_destroy(blocks);
            return fail_with(st, "blowup");
        }
        char* json = nullptr;
        const hw_status st = hw_blowup(blocks, grid, bu_e0, bu_p0[0], bu_p0[1], bu_t_init,
                                       bu_forward ? 1 : 0,
                                       bu_series.empty() ? nullptr : bu_series.c_str(),
                                       &json);
        hw_grid_destroy(grid);
        hw_blocks_destroy(blocks);
        if (st != HW_OK) return fail_with(st, "blowup");
        return emit_report(bu_report, json, "blowup") ? 0 : 2;
    }

    if (ve_cmd->parsed()) {
        char* json = nullptr;
        int all_pass = 0;
        const hw_status st =
            hw_verify(ve_suite.c_str(), ve_seed, ve_echo ? 1 : 0,
                      ve_report.empty() ? nullptr : ve_report.c_str(), &json, &all_pass);
        if (st != HW_OK) return fail_with(st, "verify");
        if (json) {
            std::fputs(json, stdout);
            hw_string_free(json);
        }
        return all_pass ? 0 : 1;
    }

    if (in_cmd->parsed()) {
        std::printf("%s\n", hw_version());
        std::printf("defaults: ground-state n=128 box=40, boosted n=256 box=60, "
                    "blowup n=512 box=8\n");
        std::printf("field format: HWF1 (complex128, row-major, x2 fastest)\n");
        std::printf("exit codes: 0 ok, 1 check failure, 2 usage/io, 3 numerical\n");
        return 0;
    }

    return 2;
}
