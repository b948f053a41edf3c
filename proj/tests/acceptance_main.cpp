#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <string>

#include "streamclust/acceptance.hpp"

namespace {

// Captured stdout of a command; stderr is dropped so timing chatter never
// enters the comparison.
std::string capture_stdout(const std::string& command, int& exit_code) {
    FILE* pipe = popen((command + " 2>/dev/null").c_str(), "r");
    if (!pipe) {
        exit_code = -1;
        return {};
    }
    std::string output;
    char buffer[4096];
    std::size_t got = 0;
    while ((got = fread(buffer, 1, sizeof buffer, pipe)) > 0) {
        output.append(buffer, got);
    }
    exit_code = pclose(pipe);
    return output;
}

streamclust::CriterionResult determinism_criterion() {
    streamclust::CriterionResult r;
    r.id = 12;
    r.title = "repeated verification is byte-identical";
    r.pass = false;

    const char* cli = std::getenv("STREAMCLUST_CLI");
    const std::string binary = cli != nullptr ? cli : "streamclust";
    const std::string command = binary + " verify-all --seed 42";

    int code_a = 0, code_b = 0;
    const std::string first = capture_stdout(command, code_a);
    const std::string second = capture_stdout(command, code_b);
    if (first.empty() || second.empty()) {
        r.detail = "could not capture output of `" + command + "`";
    } else if (first != second) {
        r.detail = "two runs differ: " + std::to_string(first.size()) + " vs " +
                   std::to_string(second.size()) + " bytes";
    } else if (code_a != code_b) {
        r.detail = "exit codes differ between runs";
    } else {
        r.pass = true;
        r.detail = "two `verify-all --seed 42` runs byte-identical (" +
                   std::to_string(first.size()) + " bytes)";
    }
    return r;
}

}  // namespace

int main() {
    auto results = streamclust::run_acceptance_suite(42);
    results.push_back(determinism_criterion());
    std::cout << streamclust::format_acceptance_summary(results) << std::flush;
    return streamclust::all_passed(results) ? 0 : 1;
}
