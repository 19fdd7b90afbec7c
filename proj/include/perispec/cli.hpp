#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "perispec/conjugation_probe.hpp"
#include "perispec/jordan.hpp"
#include "perispec/json_io.hpp"
#include "perispec/preserver.hpp"
#include "perispec/spectrum.hpp"
#include "perispec/tomography.hpp"
#include "perispec/witness.hpp"

namespace perispec::cli {

enum ExitCode : int { kSuccess = 0, kNegative = 1, kMalformed = 2, kInternal = 3 };

inline int exit_code_for(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::kNotAPreserver: return kNegative;
        case ErrorKind::kNoConvergence:
        case ErrorKind::kVerificationFailure: return kInternal;
        default: return kMalformed;
    }
}

struct CommonFlags {
    std::optional<double> tol;
    std::uint64_t seed = 0;
    std::string out;
};

struct Output {
    Json body;
    int code = kSuccess;
};

inline Json counterexample_to_json(const Counterexample& cx) {
    Json inputs = Json::array(), images = Json::array();
    for (const auto& a : cx.inputs) inputs.push_back(matrix_to_json(a));
    for (const auto& a : cx.images) images.push_back(matrix_to_json(a));
    return {{"inputs", std::move(inputs)},
            {"images", std::move(images)},
            {"before", spectrum_to_json(cx.before)},
            {"after", spectrum_to_json(cx.after)}};
}

inline Json form_to_json(const PreserverForm& form, std::size_t m) {
    return {{"variant", variant_name(form.variant)},
            {"lambda", complex_to_json(form.lambda)},
            {"lambda_pow_m", complex_to_json(std::pow(form.lambda, static_cast<int>(m)))},
            {"m", m},
            {"conjugating", form.conjugating},
            {"T", matrix_to_json(form.t)},
            {"T_inv", matrix_to_json(form.t_inv)}};
}

/**
 * A map described in JSON: either a canonical form
 * {"variant": ..., "lambda": [re, im], "T": matrix, "conjugating": bool}
 * or a lookup table {"table": [{"input": matrix, "output": matrix}, ...]}.
 */
inline BlackBoxMap map_from_json(const Json& j) {
    if (!j.is_object()) throw Error(ErrorKind::kMalformedInput, "map file must hold a JSON object");
    if (j.contains("table")) {
        if (!j["table"].is_array() || j["table"].empty()) {
            throw Error(ErrorKind::kMalformedInput, "'table' must be a non-empty array");
        }
        auto entries = std::make_shared<std::vector<std::pair<CMatrix, CMatrix>>>();
        for (const auto& e : j["table"]) {
            if (!e.is_object() || !e.contains("input") || !e.contains("output")) {
                throw Error(ErrorKind::kMalformedInput, "table entries need 'input' and 'output'");
            }
            entries->emplace_back(matrix_from_json(e["input"]), matrix_from_json(e["output"]));
        }
        const std::size_t n = entries->front().first.rows();
        for (const auto& [in, out] : *entries) {
            if (!in.is_square() || !out.is_square() || in.rows() != n || out.rows() != n) {
                throw Error(ErrorKind::kMalformedInput, "table entries must all be n x n for one n");
            }
        }
        return {n, [entries](const CMatrix& a) {
                    for (const auto& [in, out] : *entries)
                        if (in == a) return out;
                    throw Error(ErrorKind::kMalformedInput, "map table has no entry for a requested input");
                }};
    }
    if (!j.contains("T")) throw Error(ErrorKind::kMalformedInput, "map file needs either 'table' or 'T'");
    const auto variant = parse_variant(j.value("variant", std::string("similarity")));
    const Complex lambda = j.contains("lambda") ? complex_from_json(j["lambda"], "lambda") : Complex(1.0);
    const bool conjugating = j.value("conjugating", false);
    return make_form(lambda, matrix_from_json(j["T"]), variant, conjugating).as_map();
}

inline Json schedule_to_json(const std::vector<CMatrix>& queries) {
    Json list = Json::array();
    for (const auto& q : queries) list.push_back(matrix_to_json(q));
    return {{"dim", queries.empty() ? 0 : queries.front().rows()}, {"queries", std::move(list)}};
}

inline std::vector<Complex> parse_alphas(const std::string& text) {
    std::vector<Complex> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ';')) {
        const auto comma = item.find(',');
        try {
            std::size_t used = 0;
            const double re = std::stod(item.substr(0, comma), &used);
            const double im = comma == std::string::npos ? 0.0 : std::stod(item.substr(comma + 1));
            if (!std::isfinite(re) || !std::isfinite(im)) throw std::invalid_argument("non-finite");
            out.emplace_back(re, im);
        } catch (const std::exception&) {
            throw Error(ErrorKind::kMalformedInput, "cannot parse probe value '" + item + "'");
        }
    }
    if (out.empty()) throw Error(ErrorKind::kMalformedInput, "no probe values given");
    return out;
}

inline void add_common(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--tol", flags.tol, "Comparison tolerance");
    cmd->add_option("--seed", flags.seed, "Seed for every random draw");
    cmd->add_option("--out", flags.out, "Write JSON here instead of stdout");
}

inline void emit_error(std::ostream& err, std::string_view code, const std::string& message) {
    err << Json{{"error", {{"code", code}, {"message", message}}}}.dump() << "\n";
}

/// Runs one command line (without the program name) and returns the process exit code.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Peripheral spectra of generalized Jordan products and their preservers"};
    app.require_subcommand(1);
    CommonFlags flags;
    std::function<Output()> action;

    // spectrum
    std::string matrix_path;
    auto* spectrum_cmd = app.add_subcommand("spectrum", "Peripheral spectrum of a matrix");
    spectrum_cmd->add_option("--matrix", matrix_path, "Matrix JSON file")->required();
    add_common(spectrum_cmd, flags);
    spectrum_cmd->callback([&] {
        action = [&] {
            SpectrumOptions opts;
            if (flags.tol) opts.tol_radius = opts.tol_cluster = *flags.tol;
            return Output{spectrum_to_json(peripheral_spectrum(read_matrix_file(matrix_path), opts))};
        };
    });

    // jordan-eval
    std::string signature_text;
    std::vector<std::string> matrix_paths;
    auto* jordan_cmd = app.add_subcommand("jordan-eval", "Generalized Jordan product of the given operands");
    jordan_cmd->add_option("--signature", signature_text, "Index sequence, e.g. 1,2,1")->required();
    jordan_cmd->add_option("--matrices", matrix_paths, "Operand files, one per index")->required()->delimiter(',');
    add_common(jordan_cmd, flags);
    jordan_cmd->callback([&] {
        action = [&] {
            const auto sig = parse_signature(signature_text);
            std::vector<CMatrix> ops;
            for (const auto& p : matrix_paths) ops.push_back(read_matrix_file(p));
            const CMatrix product = generalized_jordan_product(sig, ops);
            const auto red = reduce_signature(sig);
            SpectrumOptions opts;
            if (flags.tol) opts.tol_radius = opts.tol_cluster = *flags.tol;
            return Output{{{"signature", sig.str()},
                           {"m", sig.m()},
                           {"reduction", {{"position", red.position}, {"r", red.exponents.r()}, {"s", red.exponents.s()}}},
                           {"product", matrix_to_json(product)},
                           {"spectrum", spectrum_to_json(peripheral_spectrum(product, opts))}}};
        };
    });

    // rank-witness
    unsigned r = 0, s = 1;
    std::size_t search_trials = 0;
    auto* witness_cmd = app.add_subcommand("rank-witness", "Rank-at-most-three witness B for a non rank-one A");
    witness_cmd->add_option("--matrix", matrix_path, "Matrix JSON file")->required();
    witness_cmd->add_option("--r", r, "Inner exponent r")->required();
    witness_cmd->add_option("--s", s, "Outer exponent s")->required();
    witness_cmd->add_option("--search", search_trials, "Use randomized search with this many trials");
    add_common(witness_cmd, flags);
    witness_cmd->callback([&] {
        action = [&] {
            const CMatrix a = read_matrix_file(matrix_path);
            const SandwichExponents exp(r, s);
            const double tol = flags.tol.value_or(kRankTol);
            std::optional<WitnessReport> rep;
            Json body{{"r", exp.r()}, {"s", exp.s()}};
            if (search_trials > 0) {
                rep = witness_search(a, exp, search_trials, flags.seed, tol);
                body["trials"] = search_trials;
            } else {
                const auto cls = classify(a, exp, tol);
                body["class"] = class_name(cls);
                if (cls == InvariantClass::kOther) rep = construct_witness(a, exp, tol);
            }
            if (!rep) {
                body["case_label"] = nullptr;
                return Output{body, kNegative};
            }
            body["case_label"] = case_label(rep->label);
            body["B"] = matrix_to_json(rep->b);
            body["rank"] = rep->rank_b;
            body["spectrum"] = spectrum_to_json(rep->spectrum);
            return Output{body};
        };
    });

    // recover
    auto* recover_cmd = app.add_subcommand("recover", "Recover A from its sandwich-spectrum oracle (self-test)");
    recover_cmd->add_option("--oracle-matrix", matrix_path, "The hidden operator A")->required();
    recover_cmd->add_option("--r", r, "Inner exponent r")->required();
    recover_cmd->add_option("--s", s, "Outer exponent s")->required();
    add_common(recover_cmd, flags);
    recover_cmd->callback([&] {
        action = [&] {
            const CMatrix a = read_matrix_file(matrix_path);
            require_square(a, "recover");
            const SandwichExponents exp(r, s);
            const CMatrix rec = recover_operator(make_sandwich_oracle(a, exp), exp, a.rows(), flags.tol.value_or(1e-7));
            const double error = max_abs_diff(rec, a);
            const bool ok = error <= 1e-8 * std::max(1.0, max_norm(a));
            return Output{{{"recovered", matrix_to_json(rec)}, {"max_error", error}, {"ok", ok}},
                          ok ? kSuccess : kNegative};
        };
    });

    // verify
    std::string map_kind = "sim", t_path;
    double lambda_re = 1.0, lambda_im = 0.0;
    std::size_t dim = 3, samples = 200;
    auto* verify_cmd = app.add_subcommand("verify", "Randomized check that a canonical map preserves peripheral spectra");
    verify_cmd->add_option("--signature", signature_text, "Index sequence, e.g. 1,2")->required();
    verify_cmd->add_option("--map", map_kind, "sim or transpose");
    verify_cmd->add_option("--lambda-re", lambda_re, "Real part of lambda");
    verify_cmd->add_option("--lambda-im", lambda_im, "Imaginary part of lambda");
    verify_cmd->add_option("--T", t_path, "Matrix JSON file for T (identity if omitted)");
    verify_cmd->add_option("--dim", dim, "Dimension when --T is omitted");
    verify_cmd->add_option("--samples", samples, "Number of random tuples");
    add_common(verify_cmd, flags);
    verify_cmd->callback([&] {
        action = [&] {
            const auto sig = parse_signature(signature_text);
            const CMatrix t = t_path.empty() ? CMatrix::identity(dim) : read_matrix_file(t_path);
            const BlackBoxMap phi = make_form({lambda_re, lambda_im}, t, parse_variant(map_kind)).as_map();
            const auto report = verify_preserver(phi, sig, samples, flags.seed, flags.tol.value_or(1e-7));
            Json body{{"passed", report.passed}, {"tuples_checked", report.tuples_checked}};
            body["counterexample"] = report.counterexample ? counterexample_to_json(*report.counterexample) : Json();
            return Output{body, report.passed ? kSuccess : kNegative};
        };
    });

    // reconstruct
    std::string map_path;
    bool emit_schedule = false;
    std::size_t pilot = 200, fresh = 100;
    auto* reconstruct_cmd = app.add_subcommand("reconstruct", "Recover (lambda, T, variant) from a preserver");
    reconstruct_cmd->add_option("--r", r, "Inner exponent r")->required();
    reconstruct_cmd->add_option("--s", s, "Outer exponent s")->required();
    reconstruct_cmd->add_option("--map-file", map_path, "Canonical form or lookup table JSON");
    reconstruct_cmd->add_flag("--emit-schedule", emit_schedule, "Print the inputs the map will be queried on");
    reconstruct_cmd->add_option("--dim", dim, "Dimension for --emit-schedule");
    reconstruct_cmd->add_option("--pilot", pilot, "Pilot verification samples");
    reconstruct_cmd->add_option("--fresh", fresh, "Fresh certification samples");
    add_common(reconstruct_cmd, flags);
    reconstruct_cmd->callback([&] {
        action = [&] {
            const SandwichExponents exp(r, s);
            ReconstructOptions opts;
            opts.pilot_samples = pilot;
            opts.fresh_samples = fresh;
            opts.seed = flags.seed;
            if (flags.tol) opts.tol = *flags.tol;
            if (emit_schedule) return Output{schedule_to_json(reconstruction_queries(dim, opts))};
            if (map_path.empty()) throw Error(ErrorKind::kMalformedInput, "reconstruct needs --map-file or --emit-schedule");
            const BlackBoxMap phi = map_from_json(read_json_file(map_path));
            try {
                return Output{form_to_json(reconstruct(phi, exp, opts), exp.m())};
            } catch (const NotAPreserver& e) {
                Json body{{"preserver", false}, {"reason", e.what()}};
                body["counterexample"] = e.counterexample() ? counterexample_to_json(*e.counterexample()) : Json();
                return Output{body, kNegative};
            }
        };
    });

    // probe
    std::string alphas_text;
    auto* probe_cmd = app.add_subcommand("probe", "Tell identity-like maps from conjugating ones");
    probe_cmd->add_option("--r", r, "Inner exponent r (must be 0)");
    probe_cmd->add_option("--s", s, "Outer exponent s")->required();
    probe_cmd->add_option("--map-file", map_path, "Canonical form or lookup table JSON");
    probe_cmd->add_option("--alphas", alphas_text, "Probe values 're,im;re,im;...'");
    probe_cmd->add_flag("--emit-schedule", emit_schedule, "Print the inputs the map will be queried on");
    probe_cmd->add_option("--dim", dim, "Dimension for --emit-schedule");
    add_common(probe_cmd, flags);
    probe_cmd->callback([&] {
        action = [&] {
            const SandwichExponents exp(r, s);
            const auto alphas = alphas_text.empty() ? default_probe_alphas() : parse_alphas(alphas_text);
            if (emit_schedule) {
                std::vector<CMatrix> queries;
                for (const auto alpha : alphas) {
                    const auto [a, b] = probe_pair(alpha, dim);
                    queries.push_back(a);
                    queries.push_back(b);
                }
                return Output{schedule_to_json(queries)};
            }
            if (map_path.empty()) throw Error(ErrorKind::kMalformedInput, "probe needs --map-file or --emit-schedule");
            const BlackBoxMap phi = map_from_json(read_json_file(map_path));
            Json alpha_json = Json::array();
            for (const auto alpha : alphas) alpha_json.push_back(complex_to_json(alpha));
            try {
                const bool identity = conjugation_probe(phi, exp, alphas, flags.tol.value_or(1e-7));
                return Output{{{"identity", identity}, {"alphas", alpha_json}}, identity ? kSuccess : kNegative};
            } catch (const NotAPreserver& e) {
                return Output{{{"identity", nullptr}, {"alphas", alpha_json}, {"reason", e.what()}}, kNegative};
            }
        };
    });

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        emit_error(err, error_code(ErrorKind::kMalformedInput), e.what());
        return kMalformed;
    }

    try {
        const Output result = action();
        const std::string text = result.body.dump() + "\n";
        if (flags.out.empty()) {
            out << text;
        } else {
            std::ofstream file(flags.out);
            if (!file) throw Error(ErrorKind::kMalformedInput, "cannot write '" + flags.out + "'");
            file << text;
        }
        return result.code;
    } catch (const Error& e) {
        emit_error(err, error_code(e.kind()), e.what());
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        emit_error(err, "internal", e.what());
        return kInternal;
    }
}

}  // namespace perispec::cli
