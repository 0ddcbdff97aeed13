// Command-line front end: detect | diagonalize | jointdiag | maxrank | bench.
// Exit codes: 0 ok (verdict in the payload), 2 input error, 3 numerical failure.

#include <chrono>
#include <cstdio>
#include <iostream>

#include "CLI11.hpp"
#include "sdc/io.hpp"
#include "sdc/solver.hpp"

namespace {

using namespace sdc;

struct CommonOpts {
    std::string file;
    std::string route = "sdp";
    std::vector<std::string> tol_overrides;
    bool json = false;
    std::string out_path;
    std::uint64_t seed = 0;
    int max_sweeps = 0;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool needs_file = true) {
    if (needs_file)
        cmd->add_option("file", o.file, "input JSON document")->required();
    cmd->add_option("--route", o.route, "detector route: sdp | pencil | both")
        ->check(CLI::IsMember({"sdp", "pencil", "both"}));
    cmd->add_option("--tol", o.tol_overrides, "tolerance override K=V (repeatable)");
    cmd->add_flag("--json", o.json, "machine-readable output");
    cmd->add_option("--out", o.out_path, "write results to this path");
    cmd->add_option("--seed", o.seed, "seed for all randomized searches");
    cmd->add_option("--max-sweeps", o.max_sweeps, "Jacobi sweep budget");
}

Route parse_route(const std::string& r) {
    if (r == "pencil") return Route::PENCIL;
    if (r == "both") return Route::BOTH;
    return Route::SDP;
}

Tolerances apply_overrides(Tolerances tol, const CommonOpts& o) {
    tol.rng_seed = o.seed;
    if (o.max_sweeps > 0) tol.max_sweeps = o.max_sweeps;
    for (const auto& kv : o.tol_overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw InputError("--tol expects K=V, got \"" + kv + "\"");
        const std::string key = kv.substr(0, eq);
        const double value = std::stod(kv.substr(eq + 1));
        if (key == "herm_tol") tol.herm_tol = value;
        else if (key == "rank_tol") tol.rank_tol = value;
        else if (key == "commute_tol") tol.commute_tol = value;
        else if (key == "pd_tol") tol.pd_tol = value;
        else if (key == "jacobi_eps") tol.jacobi_eps = value;
        else if (key == "max_sweeps") tol.max_sweeps = static_cast<int>(value);
        else if (key == "sample_bound") tol.sample_bound = static_cast<int>(value);
        else throw InputError("unknown tolerance \"" + key + "\"");
    }
    tol.validate();
    return tol;
}

constexpr int kSchemaVersion = 1;

void emit(const Json& payload, const CommonOpts& o) {
    if (o.json) {
        Json doc = payload;
        doc["schema_version"] = kSchemaVersion;
        std::cout << doc.dump(2) << "\n";
    }
}

int cmd_detect(const CommonOpts& o) {
    const InputDocument in = load_input(o.file);
    const Tolerances tol = apply_overrides(in.tolerances, o);
    const MatrixFamily fam = in.family();
    const DetectReport rep = detect(fam, tol, parse_route(o.route));
    if (o.json) {
        emit(detect_report_json(rep), o);
    } else {
        std::cout << "verdict: " << (rep.verdict == Verdict::SDC ? "SDC" : "NOT_SDC") << "\n";
        if (rep.q > 0) std::cout << "joint kernel dimension: " << rep.q << "\n";
        if (rep.max_rank >= 0) std::cout << "max pencil rank: " << rep.max_rank << "\n";
        if (rep.witness) {
            std::cout << "witness:";
            for (double x : *rep.witness) std::cout << " " << x;
            std::cout << "\n";
        }
        for (const auto& r : rep.reasons)
            std::cout << "reason: " << to_string(r.kind) << (r.text.empty() ? "" : " - " + r.text)
                      << "\n";
    }
    return 0;
}

int cmd_diagonalize(const CommonOpts& o) {
    const InputDocument in = load_input(o.file);
    const Tolerances tol = apply_overrides(in.tolerances, o);
    const MatrixFamily fam = in.family();
    const SolveOutcome sol = solve(fam, tol, parse_route(o.route));
    Json payload;
    payload["verdict"] = sol.verdict == Verdict::SDC ? "SDC" : "NOT_SDC";
    payload["detect"] = detect_report_json(sol.detect);
    if (sol.result) {
        payload["result"] = congruence_json(*sol.result);
        if (!o.out_path.empty()) {
            Json outdoc = congruence_json(*sol.result);
            write_text_file(o.out_path, outdoc.dump(2) + "\n");
        }
    }
    if (o.json) {
        emit(payload, o);
    } else if (sol.verdict == Verdict::SDC) {
        std::printf("verdict: SDC\nbackward_error: %.3e\n", sol.result->backward_error);
        if (!o.out_path.empty()) std::cout << "transform written to " << o.out_path << "\n";
    } else {
        std::cout << "verdict: NOT_SDC\n";
        for (const auto& r : sol.detect.reasons)
            std::cout << "reason: " << to_string(r.kind) << (r.text.empty() ? "" : " - " + r.text)
                      << "\n";
    }
    return 0;
}

int cmd_jointdiag(const CommonOpts& o) {
    const InputDocument in = load_input(o.file);
    const Tolerances tol = apply_overrides(in.tolerances, o);
    const MatrixFamily fam = in.family();
    const JointDiagResult jd = joint_diagonalize(fam, tol);
    Json payload;
    payload["transform"] = matrix_json(jd.u);
    payload["final_off2"] = jd.final_off2;
    payload["sweeps"] = jd.sweeps;
    payload["converged"] = jd.converged;
    payload["commuting_on_entry"] = jd.commuting_on_entry;
    payload["off2_history"] = jd.off2_history;
    if (!o.out_path.empty()) write_text_file(o.out_path, payload.dump(2) + "\n");
    if (o.json) {
        emit(payload, o);
    } else {
        std::printf("final off2: %.3e after %d sweeps (%s)\n", jd.final_off2, jd.sweeps,
                    jd.converged ? "converged" : "stalled");
        if (!jd.commuting_on_entry)
            std::cout << "warning: family is not commuting within tolerance\n";
    }
    return 0;
}

int cmd_maxrank(const CommonOpts& o, bool numeric) {
    const InputDocument in = load_input(o.file);
    const Tolerances tol = apply_overrides(in.tolerances, o);
    const MatrixFamily fam = in.family();
    const PolyMatrix pencil = pencil_from_family(fam);
    Json payload;
    if (numeric) {
        const MaxRankWitness w = max_rank_numeric(pencil, tol, fam.n());
        payload["max_rank"] = w.r;
        payload["witness"] = w.lambda_hat;
        payload["numeric"] = true;
        if (!o.json)
            std::cout << "max rank (sampled): " << w.r << "\n";
    } else {
        const SchmudgenTrace trace = schmudgen_run(pencil, tol);
        const MaxRankWitness w = max_rank_witness(trace, tol);
        payload["max_rank"] = w.r;
        payload["witness"] = w.lambda_hat;
        payload["numeric"] = false;
        payload["steps"] = trace.steps;
        Json ds = Json::array();
        for (size_t j = 0; j < trace.ds.size(); ++j) {
            // keep the printout bounded: expand only reasonably sized d_j
            const int deg = trace.ds[j].degree();
            if (deg >= 0 && deg <= 64)
                ds.push_back(trace.ds[j].expand().to_string());
            else if (deg < 0)
                ds.push_back("0");
            else
                ds.push_back("(degree " + std::to_string(deg) + " polynomial, left factored)");
        }
        payload["d"] = ds;
        if (!o.json) {
            std::cout << "max rank: " << w.r << "\nwitness:";
            for (double x : w.lambda_hat) std::cout << " " << x;
            std::cout << "\n";
            for (size_t j = 0; j < ds.size(); ++j)
                std::cout << "d_" << (j + 1) << " = " << ds[j].get<std::string>() << "\n";
        }
    }
    if (!o.out_path.empty()) write_text_file(o.out_path, payload.dump(2) + "\n");
    emit(payload, o);
    return 0;
}

int cmd_bench(const CommonOpts& o, const std::vector<std::string>& sizes, int reps) {
    Tolerances tol = apply_overrides(Tolerances{}, o);
    Json rows = Json::array();
    if (!o.json) std::printf("%4s %4s  %-12s %-10s\n", "m", "n", "Err", "time(s)");
    for (const auto& size : sizes) {
        const auto x = size.find('x');
        if (x == std::string::npos) throw InputError("--sizes expects MxN, got \"" + size + "\"");
        const int m = std::stoi(size.substr(0, x));
        const int n = std::stoi(size.substr(x + 1));
        double err_sum = 0, time_sum = 0;
        for (int rep = 0; rep < reps; ++rep) {
            const ConstructedFamily fam = random_sdc_family(n, m, o.seed + rep);
            const auto t0 = std::chrono::steady_clock::now();
            const SolveOutcome sol = solve(fam.family, tol, Route::SDP);
            const double dt =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            if (sol.verdict != Verdict::SDC)
                throw ConvergenceError("bench: constructed family not recognized as SDC");
            err_sum += sol.result->backward_error;
            time_sum += dt;
        }
        Json row;
        row["m"] = m;
        row["n"] = n;
        row["err"] = err_sum / reps;
        row["time_s"] = time_sum / reps;
        rows.push_back(row);
        if (!o.json)
            std::printf("%4d %4d  %-12.3e %-10.3f\n", m, n, err_sum / reps, time_sum / reps);
    }
    Json payload;
    payload["rows"] = rows;
    payload["repetitions"] = reps;
    if (!o.out_path.empty()) write_text_file(o.out_path, payload.dump(2) + "\n");
    emit(payload, o);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"simultaneous diagonalization of Hermitian matrix families via *-congruence"};
    app.require_subcommand(1);

    CommonOpts od, og, oj, om, ob;
    bool numeric = false;
    std::vector<std::string> sizes{"3x3", "10x20"};
    int reps = 3;

    CLI::App* detect_cmd = app.add_subcommand("detect", "decide whether the family is SDC");
    add_common(detect_cmd, od);
    CLI::App* diag_cmd =
        app.add_subcommand("diagonalize", "compute a congruence transform and diagonals");
    add_common(diag_cmd, og);
    CLI::App* joint_cmd =
        app.add_subcommand("jointdiag", "jointly diagonalize a commuting family");
    add_common(joint_cmd, oj);
    CLI::App* rank_cmd = app.add_subcommand("maxrank", "maximum rank of the Hermitian pencil");
    add_common(rank_cmd, om);
    rank_cmd->add_flag("--numeric", numeric, "sampling fallback instead of the symbolic run");
    CLI::App* bench_cmd = app.add_subcommand("bench", "random-family benchmark table");
    add_common(bench_cmd, ob, /*needs_file=*/false);
    bench_cmd->add_option("--sizes", sizes, "problem sizes MxN (repeatable)");
    bench_cmd->add_option("--reps", reps, "repetitions per size");

    try {
        app.parse(argc, argv);
        if (detect_cmd->parsed()) return cmd_detect(od);
        if (diag_cmd->parsed()) return cmd_diagonalize(og);
        if (joint_cmd->parsed()) return cmd_jointdiag(oj);
        if (rank_cmd->parsed()) return cmd_maxrank(om, numeric);
        if (bench_cmd->parsed()) return cmd_bench(ob, sizes, reps);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const sdc::InputError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
