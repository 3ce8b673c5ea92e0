// odrrsim -- deficit-round-robin scheduling simulator CLI
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "odrrsim/report.hpp"

using namespace odrrsim;

namespace {

void add_run_options(CLI::App* app, RunRequest& req, std::vector<std::string>& policies,
                     bool& gating, bool& literal_bound, bool& zero_cost) {
    app->add_option("--scenario", req.scenario_path, "scenario file (JSON, comments allowed)")
        ->required();
    app->add_option("--policy", policies, "scheduler: drr|odrr|odrredc|odrrsdc (repeatable)");
    app->add_option("--seed", req.seeds, "run seed (repeatable)");
    app->add_option("--out", req.out_dir, "output directory");
    app->add_option("--format", req.formats, "report formats: csv|json|plotdata");
    app->add_flag("--interclass-gating", gating,
                  "enable the alternating 2^k inter-class scheduling intervals");
    app->add_flag("--literal-delay-bound", literal_bound,
                  "also report the delay bound with the literal (n*s) + Max/B parenthesization");
    app->add_flag("--zero-cost-failures", zero_cost,
                  "failed attempts consume no output-line time");
}

int finish_request(RunRequest& req, const std::vector<std::string>& policies, bool gating,
                   bool literal_bound, bool zero_cost) {
    for (const auto& p : policies) req.policies.push_back(policy_from_name(p));
    if (req.policies.empty()) req.policies.push_back(SchedulerPolicy::DRR);
    if (req.seeds.empty()) req.seeds.push_back(1);
    if (req.out_dir.empty()) req.out_dir = "out";
    if (gating) req.flags.gating_override = GatingMode::Alternating;
    req.flags.literal_delay_bound = literal_bound;
    req.flags.zero_cost_failures = zero_cost;
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"deficit-round-robin family scheduling simulator (DRR, ODRR, ODRREDC, ODRRSDC)"};
    app.require_subcommand(1);

    RunRequest run_req, cmp_req;
    std::vector<std::string> run_policies, cmp_policies;
    bool run_gating = false, run_literal = false, run_zero = false;
    bool cmp_gating = false, cmp_literal = false, cmp_zero = false;
    bool run_compare_flag = false;
    std::string validate_path;

    CLI::App* run = app.add_subcommand("run", "simulate and write reports");
    add_run_options(run, run_req, run_policies, run_gating, run_literal, run_zero);
    run->add_flag("--compare", run_compare_flag, "also emit the policy comparison table");

    CLI::App* cmp = app.add_subcommand("compare", "run several policies and tabulate them");
    add_run_options(cmp, cmp_req, cmp_policies, cmp_gating, cmp_literal, cmp_zero);

    CLI::App* val = app.add_subcommand("validate", "check a scenario file");
    val->add_option("--scenario", validate_path, "scenario file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            finish_request(run_req, run_policies, run_gating, run_literal, run_zero);
            int rc = cmd_run(run_req, std::cout, std::cerr);
            if (rc == 0 && run_compare_flag && run_req.policies.size() >= 2)
                rc = cmd_compare(run_req, std::cout, std::cerr);
            return rc;
        }
        if (cmp->parsed()) {
            finish_request(cmp_req, cmp_policies, cmp_gating, cmp_literal, cmp_zero);
            if (cmp_req.policies.size() < 2) {
                std::cerr << "error: compare needs at least two --policy values\n";
                return 1;
            }
            return cmd_compare(cmp_req, std::cout, std::cerr);
        }
        if (val->parsed())
            return cmd_validate(validate_path, std::cout, std::cerr);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
