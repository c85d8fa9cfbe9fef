#pragma once

// Batch drivers: run the coloring procedure over generated or enumerated
// instance families, count outcomes, and drop a replayable witness (instance
// bytes plus trace) for every non-success.

#include <atomic>
#include <filesystem>
#include <fstream>
#include <thread>

#include "efl/builder.hpp"
#include "efl/colorer.hpp"

namespace efl {

struct HuntReport {
    std::string params_line;  // first report line, parameters included
    std::size_t success = 0;
    std::size_t stuck_s2 = 0;
    std::size_t stuck_s6 = 0;
    std::size_t improper = 0;
    std::vector<std::string> witnesses;  // instance file paths, run order

    std::size_t total() const { return success + stuck_s2 + stuck_s6 + improper; }
};

inline void write_report(const HuntReport& r, std::ostream& out) {
    out << r.params_line << '\n';
    out << "success=" << r.success << " stuck_s2=" << r.stuck_s2 << " stuck_s6=" << r.stuck_s6
        << " improper=" << r.improper << '\n';
    for (const auto& w : r.witnesses) out << "witness " << w << '\n';
}

namespace detail {

struct RunResult {
    OutcomeKind kind = OutcomeKind::Success;
    StepKind stuck_step = StepKind::Extend;
    std::string tag;            // witness file stem, e.g. "witness_n5_s42"
    std::string instance_text;  // populated for non-success only
    std::string trace_text;
};

inline RunResult evaluate(const EflInstance& inst, std::string tag) {
    const ColoringOutcome outcome = run_procedure(inst);
    RunResult r;
    r.kind = outcome.kind;
    r.stuck_step = outcome.stuck_step;
    r.tag = std::move(tag);
    if (outcome.kind != OutcomeKind::Success) {
        r.instance_text = instance_text(inst);
        std::ostringstream trace;
        write_trace(outcome.trace, trace);
        if (outcome.kind == OutcomeKind::Stuck)
            trace << "OUTCOME STUCK " << step_name(outcome.stuck_step) << ' '
                  << outcome.stuck_context << '\n';
        else
            trace << "OUTCOME IMPROPER violations=" << outcome.violations.size()
                  << " inconsistent=" << outcome.inconsistencies.size() << '\n';
        r.trace_text = trace.str();
    }
    return r;
}

// Evaluates instances[i] for every i on `jobs` threads; results keep instance
// order, so aggregation is schedule-independent.
template <class Make>
std::vector<RunResult> evaluate_all(std::size_t count, int jobs, Make&& make) {
    std::vector<RunResult> results(count);
    std::atomic<std::size_t> cursor{0};
    auto worker = [&] {
        for (std::size_t i = cursor.fetch_add(1); i < count; i = cursor.fetch_add(1))
            results[i] = make(i);
    };
    if (jobs <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return results;
}

inline HuntReport aggregate(std::vector<RunResult> results, const std::string& params_line,
                            const std::string& witness_dir) {
    HuntReport report;
    report.params_line = params_line;
    for (auto& r : results) {
        switch (r.kind) {
            case OutcomeKind::Success: ++report.success; break;
            case OutcomeKind::Stuck:
                r.stuck_step == StepKind::S2Repair ? ++report.stuck_s2 : ++report.stuck_s6;
                break;
            case OutcomeKind::Improper: ++report.improper; break;
        }
        if (r.kind == OutcomeKind::Success) continue;
        std::filesystem::create_directories(witness_dir);
        const std::string stem = witness_dir + "/" + r.tag;
        std::ofstream(stem + ".efl") << r.instance_text;
        std::ofstream(stem + ".trace") << r.trace_text;
        report.witnesses.push_back(stem + ".efl");
    }
    return report;
}

inline std::string format_double(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

}  // namespace detail

struct HuntParams {
    int n = 0;
    int count = 0;
    double p = 0.0;
    double q = 0.0;
    std::uint64_t seed = 0;
    std::string witness_dir = "witnesses";
    int jobs = 1;
    std::ostream* dump_systems = nullptr;  // SYS blocks stream here when set
};

// Runs `count` generated instances; instance i uses seed + i.
inline HuntReport run_hunt(const HuntParams& params) {
    if (params.n < 1) throw std::invalid_argument("order must be positive");
    if (params.count < 0) throw std::invalid_argument("count must be nonnegative");

    std::vector<LabelSystem> systems(static_cast<std::size_t>(params.count));
    for (int i = 0; i < params.count; ++i) {
        systems[static_cast<std::size_t>(i)] =
            random_system(params.n, params.p, params.q, params.seed + static_cast<std::uint64_t>(i));
        if (params.dump_systems) write_system(systems[static_cast<std::size_t>(i)], *params.dump_systems);
    }

    auto results = detail::evaluate_all(systems.size(), params.jobs, [&](std::size_t i) {
        return detail::evaluate(realize(systems[i]),
                                "witness_n" + std::to_string(params.n) + "_s" +
                                    std::to_string(params.seed + i));
    });

    const std::string params_line = "HUNT n=" + std::to_string(params.n) +
                                    " count=" + std::to_string(params.count) +
                                    " p=" + detail::format_double(params.p) +
                                    " q=" + detail::format_double(params.q) +
                                    " seed=" + std::to_string(params.seed);
    return detail::aggregate(std::move(results), params_line, params.witness_dir);
}

struct EnumerateParams {
    int n = 0;
    int n_cap = kEnumerationCap;
    std::string witness_dir = "witnesses";
    int jobs = 1;
    std::ostream* dump_systems = nullptr;
};

// Streams every enumerated system of order n through the procedure.
inline HuntReport run_enumeration(const EnumerateParams& params) {
    const auto systems = all_systems(params.n, params.n_cap);
    if (params.dump_systems)
        for (const auto& s : systems) write_system(s, *params.dump_systems);

    auto results = detail::evaluate_all(systems.size(), params.jobs, [&](std::size_t i) {
        return detail::evaluate(realize(systems[i]), "witness_n" + std::to_string(params.n) +
                                                         "_i" + std::to_string(i));
    });

    const std::string params_line =
        "ENUM n=" + std::to_string(params.n) + " count=" + std::to_string(systems.size());
    return detail::aggregate(std::move(results), params_line, params.witness_dir);
}

}  // namespace efl
