#include "supercurve/job.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

int main(int argc, char** argv) {
    CLI::App app{"exact calculator for (1|1) supercurves and their duals"};
    std::string command, input_path, output_path, format = "text";
    app.add_option("command", command,
                   "dual-curve | classify | cohomology | transform-bundle | "
                   "direct-image | lift-delta | check-identities")
        ->required();
    app.add_option("--input", input_path, "job document (YAML)")->required();
    app.add_option("--output", output_path, "write result here instead of stdout");
    app.add_option("--format", format, "text | structured")
        ->check(CLI::IsMember({"text", "structured"}));
    CLI11_PARSE(app, argc, argv);

    std::ifstream in(input_path);
    if (!in) {
        std::cerr << "error: cannot open " << input_path << "\n";
        return 2;
    }
    std::stringstream buf;
    buf << in.rdbuf();

    supercurve::JobDescription job;
    try {
        job = supercurve::parse_job(buf.str());
    } catch (const supercurve::JobParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    }
    if (job.command != command) {
        std::cerr << "parse error: document command '" << job.command
                  << "' does not match requested '" << command << "'\n";
        return 2;
    }

    supercurve::JobResult result;
    try {
        result = supercurve::run_job(job);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    const std::string& body = format == "structured" ? result.structured : result.rendered;
    if (output_path.empty()) {
        std::cout << body;
    } else {
        std::ofstream out(output_path);
        if (!out) {
            std::cerr << "error: cannot write " << output_path << "\n";
            return 1;
        }
        out << body;
    }
    return 0;
}
