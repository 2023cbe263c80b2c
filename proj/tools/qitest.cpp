// qitest: quasi-independence tests for left-truncated (and right-censored)
// survival data.

#include <omp.h>

#include <CLI11.hpp>
#include <algorithm>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "qi/are.hpp"
#include "qi/channing.hpp"
#include "qi/coxscore.hpp"
#include "qi/errors.hpp"
#include "qi/io.hpp"
#include "qi/report.hpp"
#include "qi/simulate.hpp"
#include "qi/teststat.hpp"

namespace {

enum ExitCode {
    kOk = 0,
    kOther = 1,
    kUsage = 2,
    kParse = 3,
    kValidation = 4,
    kDegenerateDataset = 5,
    kDegenerateVariance = 6,
    kIntegration = 7,
    kSimulation = 8,
};

struct Common {
    std::string format = "table";
    int threads = 0;
};

struct InputOptions {
    qi::InputSpec spec;
    std::string event_column;
    std::string group_column;
    std::string group_value;
    std::string delimiter = ",";
    bool no_header = false;
    bool skip_invalid = false;

    void add_to(CLI::App* cmd) {
        cmd->add_option("input", spec.path, "CSV file")->required();
        cmd->add_option("--entry-col", spec.entry_column, "entry time column")
            ->capture_default_str();
        cmd->add_option("--exit-col", spec.exit_column, "exit time column")
            ->capture_default_str();
        cmd->add_option("--event-col", event_column,
                        "event indicator column (default: 'event' when present)");
        cmd->add_option("--group-col", group_column, "column used to select a subgroup");
        cmd->add_option("--group", group_value, "value of --group-col to keep");
        cmd->add_option("--delimiter", delimiter, "field separator")->capture_default_str();
        cmd->add_flag("--no-header", no_header, "columns are 1-based positions");
        cmd->add_option("--units", spec.time_units, "label for the time unit");
        cmd->add_flag("--skip-invalid", skip_invalid, "drop rows with entry >= exit");
    }

    qi::InputSpec resolve() const {
        qi::InputSpec s = spec;
        if (!event_column.empty()) s.event_column = event_column;
        if (!group_column.empty()) s.group_column = group_column;
        if (!group_value.empty()) s.group_value = group_value;
        if (delimiter == "\\t" || delimiter == "tab") {
            s.delimiter = '\t';
        } else if (delimiter.size() == 1) {
            s.delimiter = delimiter[0];
        } else {
            throw CLI::ValidationError("--delimiter", "must be a single character");
        }
        s.header = !no_header;
        if (no_header && spec.entry_column == "entry") s.entry_column = "1";
        if (no_header && spec.exit_column == "exit") s.exit_column = "2";
        s.invalid_rows = skip_invalid ? qi::InvalidRowPolicy::Skip : qi::InvalidRowPolicy::Reject;
        return s;
    }
};

qi::OutputFormat output_format(const Common& c) {
    const auto f = qi::parse_format(c.format);
    if (!f) throw CLI::ValidationError("--format", "expected table, json or csv");
    return *f;
}

qi::KernelSpec kernel_arg(const std::string& name, const char* flag) {
    const auto k = qi::parse_kernel(name);
    if (!k) throw CLI::ValidationError(flag, "expected sign, linear or rank");
    return *k;
}

void emit(const qi::ReportEnvelope& env, const qi::TextTable& table, qi::OutputFormat format) {
    if (format == qi::OutputFormat::Json) {
        std::cout << qi::dump(qi::to_json(env)) << '\n';
        return;
    }
    std::cout << qi::render(table, format);
    for (const auto& w : env.warnings) std::cerr << "warning: " << w << '\n';
}

std::uint64_t default_seed() {
    if (const char* env = std::getenv("QITEST_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw CLI::ValidationError("QITEST_SEED", "not an unsigned integer");
        }
    }
    return 1;
}

const char* kAssumption3bWarning =
    "h is not the sign kernel on censored data: the null distribution also needs the "
    "entry and censoring times to be quasi-independent. Check this by rerunning with "
    "--reverse and a sign h kernel.";

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quasi-independence tests for left-truncated survival data"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", std::string(qi::kToolVersion));

    Common common;
    app.add_option("--format", common.format, "table, json or csv")
        ->capture_default_str()
        ->envname("QITEST_FORMAT");
    app.add_option("--threads", common.threads, "worker threads (0 = OpenMP default)");

    // test
    auto* test = app.add_subcommand("test", "run one quasi-independence test on a CSV file");
    test->set_help_flag("--help", "Print this help message and exit");
    InputOptions test_input;
    test_input.add_to(test);
    std::string g_name = "sign", h_name = "sign";
    bool reverse = false, force_censored = false, force_truncated = false, all_pairs = false;
    test->add_option("--g", g_name, "kernel on entry times")->capture_default_str();
    test->add_option("--h", h_name, "kernel on exit times")->capture_default_str();
    test->add_flag("--reverse", reverse, "swap the roles of failure and censoring");
    test->add_flag("--censored", force_censored, "use the censored comparable region");
    test->add_flag("--uncensored", force_truncated, "ignore event bits (truncation only)");
    test->add_flag("--all", all_pairs, "run the five standard kernel pairs");

    // simulate
    auto* sim = app.add_subcommand("simulate", "Monte Carlo level and power");
    std::string scenario_name = "all";
    std::size_t reps = 2000, n = 400;
    double level = 0.05, censoring = 0.0;
    std::uint64_t seed = 0;
    sim->add_option("--scenario", scenario_name,
                    "exp-null, exp-linear, exp-nonlinear, normal-null, normal-alt or all")
        ->capture_default_str();
    sim->add_option("--reps", reps, "replicates")->capture_default_str();
    sim->add_option("--n", n, "sample size after truncation")->capture_default_str();
    sim->add_option("--level", level, "nominal level")->capture_default_str();
    sim->add_option("--censoring", censoring, "target censored fraction (0 = none)")
        ->capture_default_str();
    auto* seed_opt = sim->add_option("--seed", seed, "master seed (default $QITEST_SEED or 1)");

    // are
    auto* are = app.add_subcommand("are", "asymptotic relative efficiencies");
    std::string form_name = "excess";
    are->add_option("--form", form_name, "excess or relative risk parametrization")
        ->capture_default_str();

    // channing
    auto* chan = app.add_subcommand("channing", "bundled Channing House analysis");
    std::string group_name = "both";
    chan->add_option("--group", group_name, "men, women or both")->capture_default_str();

    // cox-check
    auto* cox = app.add_subcommand("cox-check", "Cox score identities on a CSV file");
    InputOptions cox_input;
    cox_input.add_to(cox);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kUsage;
    }

    std::vector<std::string> args(argv, argv + argc);
    try {
        const auto format = output_format(common);
        if (common.threads > 0) omp_set_num_threads(common.threads);

        if (test->parsed()) {
            auto ingest = qi::ingest_csv(test_input.resolve());
            qi::ReportEnvelope env{"test", args, std::nullopt, ingest.warnings, {}};
            if (force_censored && force_truncated) {
                throw CLI::ValidationError("--censored", "conflicts with --uncensored");
            }
            bool censored = ingest.has_event_column;
            if (force_censored) censored = true;
            if (force_truncated) censored = false;
            if (reverse && !censored) {
                throw CLI::ValidationError("--reverse", "needs censored mode");
            }
            const qi::Dataset data = reverse ? qi::reverse_roles(ingest.data) : ingest.data;
            std::vector<qi::KernelPair> pairs;
            if (all_pairs) {
                pairs.assign(std::begin(qi::kStudyKernelPairs), std::end(qi::kStudyKernelPairs));
            } else {
                pairs.push_back({kernel_arg(g_name, "--g"), kernel_arg(h_name, "--h")});
            }
            const auto results = qi::quasi_independence_tests(data, pairs, qi::region_for(censored));
            bool needs_3b = false;
            for (const auto& r : results) needs_3b = needs_3b || r.assumption_3b_required;
            if (needs_3b) env.warnings.push_back(kAssumption3bWarning);
            qi::Json arr = qi::Json::array();
            for (const auto& r : results) arr.push_back(qi::to_json(r));
            env.payload = {{"reversed", reverse}, {"tests", arr}};
            emit(env, qi::test_table(results), format);
        } else if (sim->parsed()) {
            if (seed_opt->empty()) seed = default_seed();
            std::vector<qi::Family> families;
            if (scenario_name == "all") {
                families = {qi::Family::ExpNull, qi::Family::NormalNull, qi::Family::ExpLinear,
                            qi::Family::ExpNonlinear, qi::Family::NormalAlt};
            } else {
                const auto f = qi::parse_family(scenario_name);
                if (!f) throw CLI::ValidationError("--scenario", "unknown scenario");
                families = {*f};
            }
            qi::ReportEnvelope env{"simulate", args, seed, {}, {}};
            std::vector<qi::ExperimentReport> reports;
            qi::Json arr = qi::Json::array();
            for (auto f : families) {
                qi::SimScenario s;
                s.family = f;
                s.target_n = n;
                s.censoring_target = censoring;
                s.seed = seed;
                reports.push_back(qi::run_experiment(s, qi::kStudyKernelPairs, reps, level));
                arr.push_back(qi::to_json(reports.back()));
                for (const auto& note : reports.back().notes) {
                    const auto msg = qi::to_string(f) + ": " + note;
                    env.warnings.push_back(msg);
                }
            }
            env.payload = {{"experiments", arr}};
            emit(env, qi::experiment_table(reports), format);
        } else if (are->parsed()) {
            qi::RiskForm form;
            if (form_name == "excess") {
                form = qi::RiskForm::Excess;
            } else if (form_name == "relative") {
                form = qi::RiskForm::Relative;
            } else {
                throw CLI::ValidationError("--form", "expected excess or relative");
            }
            const auto cells = qi::are_table(form);
            qi::ReportEnvelope env{"are", args, std::nullopt, {}, qi::to_json(cells, form)};
            if (std::any_of(cells.begin(), cells.end(),
                            [](const qi::AreCell& c) { return c.leading_order; })) {
                env.warnings.push_back(
                    "M2 covariate has a pole at 0: its efficacies diverge and the reported "
                    "ratios are the leading-order limits (rows marked +)");
            }
            emit(env, qi::are_text_table(cells), format);
        } else if (chan->parsed()) {
            const auto group = qi::parse_channing_group(group_name);
            if (!group) throw CLI::ValidationError("--group", "expected men, women or both");
            const auto data = qi::load_channing();
            const auto rows = qi::channing_analysis(data, *group);
            qi::ReportEnvelope env{"channing", args, std::nullopt, data.warnings,
                                   qi::to_json(data, rows)};
            env.warnings.push_back(kAssumption3bWarning);
            emit(env, qi::channing_table(rows), format);
        } else if (cox->parsed()) {
            auto ingest = qi::ingest_csv(cox_input.resolve());
            const auto& d = ingest.data;
            qi::ReportEnvelope env{"cox-check", args, std::nullopt, ingest.warnings, {}};
            const bool ties = qi::has_tied_times(d);
            if (ties) {
                env.warnings.push_back(
                    "tied times present: the pairwise identities are exact only without ties");
            }
            const auto id = [](double l) { return l; };
            const double cov_sweep = qi::cox_score_covariate(d, id, qi::ScoreMethod::Sweep);
            const double cov_direct = qi::cox_score_covariate(d, id, qi::ScoreMethod::Direct);
            const double cov_pair = qi::cox_covariate_pairwise(d, id);
            const double rk_sweep = qi::cox_score_rankstar(d, qi::ScoreMethod::Sweep);
            const double rk_direct = qi::cox_score_rankstar(d, qi::ScoreMethod::Direct);
            const double rk_pair = qi::cox_rankstar_pairwise(d);
            env.payload = {{"n", d.size()},
                           {"tied_times", ties},
                           {"covariate_identity",
                            {{"sweep", cov_sweep}, {"direct", cov_direct}, {"pairwise", cov_pair}}},
                           {"rankstar",
                            {{"sweep", rk_sweep}, {"direct", rk_direct}, {"pairwise", rk_pair}}}};
            qi::TextTable t;
            t.headers = {"score", "sweep", "direct", "pairwise"};
            t.rows.push_back({std::string("covariate L"), cov_sweep, cov_direct, cov_pair});
            t.rows.push_back({std::string("rank R*"), rk_sweep, rk_direct, rk_pair});
            emit(env, t, format);
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const qi::ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return kParse;
    } catch (const qi::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << '\n';
        return kValidation;
    } catch (const qi::DegenerateDataset& e) {
        std::cerr << "degenerate dataset: " << e.what() << '\n';
        return kDegenerateDataset;
    } catch (const qi::DegenerateVariance& e) {
        std::cerr << "degenerate variance: " << e.what() << '\n';
        return kDegenerateVariance;
    } catch (const qi::IntegrationFailure& e) {
        std::cerr << "integration failure: " << e.what() << '\n';
        return kIntegration;
    } catch (const qi::GenerationStall& e) {
        std::cerr << "simulation error: " << e.what() << '\n';
        return kSimulation;
    } catch (const qi::CalibrationFailure& e) {
        std::cerr << "simulation error: " << e.what() << '\n';
        return kSimulation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kOther;
    }
    return kOk;
}
