#include <CLI11.hpp>

#include "glab/cli.hpp"

int main(int argc, char** argv) {
    using namespace glab::cli;
    CLI::App app{"Exact toolkit for divisorial rings, chamber decompositions and fundamental domains"};
    app.set_version_flag("--version", std::string(tool_version));
    JobSpec job;
    std::uint64_t seed = 0;
    long box = 0, kmax = 0;
    std::size_t samples = 0;
    app.add_option("command", job.command, "Job to run")->required()->check(CLI::IsMember(commands()));
    app.add_option("--input,-i", job.input, "Input document, - for stdin")->required();
    app.add_option("--output,-o", job.output, "Report path, - for stdout")->required();
    auto* o_seed = app.add_option("--seed", seed, "Seed for sampled checks (default 0)");
    auto* o_box = app.add_option("--box", box, "Box bound for curve-ring (default 20)")->check(CLI::PositiveNumber);
    auto* o_kmax = app.add_option("--kmax", kmax, "Largest multiple for dimension tables (default 6)")
                       ->check(CLI::NonNegativeNumber);
    auto* o_samples = app.add_option("--samples", samples, "Tiling samples (default 1000)");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : schema_error;
    }
    if (o_seed->count())
        job.seed = seed;
    if (o_box->count())
        job.box = box;
    if (o_kmax->count())
        job.kmax = kmax;
    if (o_samples->count())
        job.samples = samples;

    const JobResult res = run_job(job);
    const std::string text = render(res.report);
    if (job.output == "-") {
        std::cout << text;
        if (res.exit_code != ok)
            std::cerr << summary(res.report) << "\n";
    } else {
        std::ofstream out(job.output, std::ios::binary);
        if (!out) {
            std::cerr << "cannot write " << job.output << "\n";
            return computation_error;
        }
        out << text;
        (res.exit_code == ok ? std::cout : std::cerr) << summary(res.report) << "\n";
    }
    return res.exit_code;
}
