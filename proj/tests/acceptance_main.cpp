// Runs every acceptance criterion and prints one line each; exit status is nonzero on any failure.
#include <iostream>

#include "rmnest/acceptance.hpp"

int main() {
    int failed = 0;
    for (const auto& c : rmnest::acceptance::criteria()) {
        auto r = rmnest::acceptance::run_one(c);
        std::cout << rmnest::acceptance::format_line(r) << std::endl;
        failed += !r.pass;
    }
    std::cout << (failed ? std::to_string(failed) + " criteria failed" : std::string("all criteria passed")) << std::endl;
    return failed ? 1 : 0;
}
