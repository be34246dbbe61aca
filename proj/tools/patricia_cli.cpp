// Command-line front end: experiments, tables and verification suites.
#include "patricia/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

using namespace patricia;
using namespace patricia::cli;

namespace {

void common_options(CLI::App* sub, RunConfig& c)
{
    sub->add_option("--p", c.p, "Bias p as a decimal string, 1/2 <= p < 1")->capture_default_str();
    sub->add_option("--precision", c.precision_bits, "Working precision in bits")
        ->check(CLI::Range(64u, 1u << 16))
        ->capture_default_str();
    sub->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    sub->add_option("--out", c.out, "Output file (stdout when omitted)");
}

void trunc_options(CLI::App* sub, RunConfig& c)
{
    sub->add_option("--J0", c.trunc.J0, "J truncation")->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("--L0", c.trunc.L0, "L truncation")->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("--K0", c.trunc.K0, "K truncation")->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("--R0", c.trunc.R0, "Minimum R window half-width")->check(CLI::PositiveNumber)->capture_default_str();
}

} // namespace

int main(int argc, char** argv)
{
    RunConfig c;
    for (int i = 1; i < argc; ++i) c.argv.emplace_back(argv[i]);

    CLI::App app{"PATRICIA trie profile, height and fillup toolkit"};
    app.require_subcommand(1);

    auto* sim = app.add_subcommand("simulate", "Monte Carlo trials of the coupled PATRICIA trie");
    common_options(sim, c);
    sim->add_option("--n", c.n, "Number of strings")->check(CLI::PositiveNumber)->capture_default_str();
    sim->add_option("--trials", c.trials, "Number of trials")->check(CLI::PositiveNumber)->capture_default_str();
    sim->add_option("--seed", c.seed, "Master seed")->capture_default_str();
    sim->add_option("--threads", c.threads, "Worker threads (0 = hardware)")->capture_default_str();

    auto* prof = app.add_subcommand("profile", "Exact mean (and variance) of the external profile");
    common_options(prof, c);
    prof->add_option("--n", c.n, "Largest n in the table")->check(CLI::PositiveNumber)->capture_default_str();
    prof->add_flag("--second", c.second, "Include the variance column");

    auto* xi = app.add_subcommand("xi", "Limit coefficients xi_l");
    common_options(xi, c);
    xi->add_option("--L", c.ell_max, "Largest l")->check(CLI::PositiveNumber)->capture_default_str();

    auto* id = app.add_subcommand("identity", "D(p) and the telescoping witness");
    common_options(id, c);
    id->add_option("--n", c.n, "Witness length (at most 100)")->check(CLI::PositiveNumber)->capture_default_str();

    auto* cs = app.add_subcommand("cseries", "C(p,u,v), its components and gradient");
    common_options(cs, c);
    trunc_options(cs, c);
    cs->add_option("--u", c.u, "u > 0")->capture_default_str();
    cs->add_option("--v", c.v, "0 <= v < 1")->capture_default_str();
    cs->add_flag("--grad", c.gradient, "Append central-difference derivatives");
    cs->add_option("--step", c.step, "Finite-difference step")->capture_default_str();

    auto* tab = app.add_subcommand("tables", "Regenerate the published tables with diff columns");
    common_options(tab, c);
    trunc_options(tab, c);
    tab->add_option("--table", c.table, "Which table")->check(CLI::IsMember({"c", "h1", "grad"}))->capture_default_str();
    tab->add_option("--step", c.step, "Finite-difference step for the gradient table")->capture_default_str();

    auto* as = app.add_subcommand("asymptotics", "Height, fillup and depth predictions");
    common_options(as, c);
    as->add_option("--n", c.n, "Number of strings")->check(CLI::Range(3u, 4294967295u))->capture_default_str();
    as->add_option("--epsilon", c.epsilon, "Window parameter")->check(CLI::Range(0.0, 1.0))->capture_default_str();

    auto* ver = app.add_subcommand("verify", "Run the invariant suites");
    common_options(ver, c);
    std::vector<std::string> suites = suite_names();
    suites.push_back("all");
    ver->add_option("--suite", c.suite, "Suite to run")->check(CLI::IsMember(suites))->capture_default_str();
    ver->add_option("--inject-fault", c.inject_fault, "Mutation test: perturb one table entry")
        ->check(CLI::IsMember({"mu"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? exit_ok : exit_usage;
    }
    c.subcommand = app.get_subcommands().front()->get_name();

    try {
        PrecisionScope scope(c.precision_bits);
        Table t;
        bool verified = true;
        if (c.subcommand == "simulate") t = cmd_simulate(c);
        else if (c.subcommand == "profile") t = cmd_profile(c);
        else if (c.subcommand == "xi") t = cmd_xi(c);
        else if (c.subcommand == "identity") t = cmd_identity(c);
        else if (c.subcommand == "cseries") t = cmd_cseries(c);
        else if (c.subcommand == "tables") t = cmd_tables(c);
        else if (c.subcommand == "asymptotics") t = cmd_asymptotics(c);
        else std::tie(t, verified) = cmd_verify(c);

        if (c.out.empty()) {
            write(std::cout, t, c.format);
        } else {
            std::ofstream f(c.out, std::ios::binary);
            if (!f) {
                std::cerr << "error: cannot open " << c.out << '\n';
                return exit_usage;
            }
            write(f, t, c.format);
        }
        return verified ? exit_ok : exit_verification;
    } catch (const precision_error& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return exit_numerical;
    } catch (const domain_error& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_numerical;
    }
}
