#include "splinekit/targets.hpp"

#include <cmath>
#include <stdexcept>

namespace splinekit::targets {

namespace {

const double PI = 3.14159265358979323846;

std::vector<Target> make_targets() {
    std::vector<Target> t;
    t.push_back({"linear",
                 [](double x, double y) { return x + y; },
                 [](double, double) { return 1.0; },
                 [](double, double) { return 1.0; },
                 [](double, double) { return 0.0; }});
    t.push_back({"quadratic",
                 [](double x, double y) { return x * x + y * y; },
                 [](double x, double) { return 2 * x; },
                 [](double, double y) { return 2 * y; },
                 [](double, double) { return 4.0; }});
    t.push_back({"sinpi",
                 [](double x, double y) { return std::sin(PI * x) * std::sin(PI * y); },
                 [](double x, double y) { return PI * std::cos(PI * x) * std::sin(PI * y); },
                 [](double x, double y) { return PI * std::sin(PI * x) * std::cos(PI * y); },
                 [](double x, double y) {
                     return -2 * PI * PI * std::sin(PI * x) * std::sin(PI * y);
                 }});
    t.push_back({"sin2pi",
                 [](double x, double y) { return std::sin(2 * PI * x) * std::sin(2 * PI * y); },
                 [](double x, double y) { return 2 * PI * std::cos(2 * PI * x) * std::sin(2 * PI * y); },
                 [](double x, double y) { return 2 * PI * std::sin(2 * PI * x) * std::cos(2 * PI * y); },
                 [](double x, double y) {
                     return -8 * PI * PI * std::sin(2 * PI * x) * std::sin(2 * PI * y);
                 }});
    t.push_back({"gauss",
                 [](double x, double y) {
                     return std::exp(1 - (x - 0.5) * (x - 0.5) - (y - 0.5) * (y - 0.5)) / std::exp(1.0);
                 },
                 [](double x, double y) {
                     return -2 * (x - 0.5) *
                            std::exp(-(x - 0.5) * (x - 0.5) - (y - 0.5) * (y - 0.5));
                 },
                 [](double x, double y) {
                     return -2 * (y - 0.5) *
                            std::exp(-(x - 0.5) * (x - 0.5) - (y - 0.5) * (y - 0.5));
                 },
                 [](double x, double y) {
                     double r2 = (x - 0.5) * (x - 0.5) + (y - 0.5) * (y - 0.5);
                     return (4 * r2 - 4) * std::exp(-r2);
                 }});
    return t;
}

}  // namespace

const std::vector<Target>& all_targets() {
    static const std::vector<Target> targets = make_targets();
    return targets;
}

const Target& lookup(const std::string& name) {
    for (const auto& t : all_targets())
        if (t.name == name) return t;
    throw std::invalid_argument("unknown target function: " + name);
}

const std::vector<std::pair<std::string, Field>>& benchmark_functions() {
    static const std::vector<std::pair<std::string, Field>> fns = {
        {"f1", [](double x, double) { return x * x; }},
        {"f2", [](double x, double y) { return x * y; }},
        {"f3", [](double x, double) { return std::sin(x); }},
        {"f4", [](double x, double y) { return std::tan(x - y) / std::tan(1.0); }},
        {"f5",
         [](double x, double y) {
             return std::sin(std::sin(std::sin(std::sin(x * x - y * y))));
         }},
        {"f6",
         [](double x, double y) {
             return std::exp(1 - (x - 0.5) * (x - 0.5) - (y - 0.5) * (y - 0.5)) / std::exp(1.0);
         }},
        {"f7", [](double x, double y) { return std::log(1 + x * x + y * y) / std::log(4.0); }},
        {"f8", [](double x, double y) { return (x + 2 * y) / (3 * (1 + x * x + y * y)); }},
        {"f9", [](double x, double y) { return std::tan(x * x - y * y) / std::tan(1.0); }},
        {"f10",
         [](double x, double y) {
             return std::exp(-std::cos(1 + std::sin(1 + std::cos(x * x - y * y)))) / std::exp(1.0);
         }},
    };
    return fns;
}

}  // namespace splinekit::targets
