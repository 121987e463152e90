#ifndef WPL_REPORT_HPP
#define WPL_REPORT_HPP

#include <algorithm>
#include <chrono>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace wpl {

enum class Status { Pass, Fail, PassProbabilistic, Skipped };

inline const char* status_name(Status s) {
    switch (s) {
        case Status::Pass: return "PASS";
        case Status::Fail: return "FAIL";
        case Status::PassProbabilistic: return "PASS(probabilistic)";
        case Status::Skipped: return "SKIPPED";
    }
    return "?";
}

struct Check {
    std::string id;
    std::string paper_ref;
    Status status = Status::Pass;
    std::string lhs;
    std::string rhs;
    double elapsed_ms = 0.0;
};

/** \brief Ordered list of checks with a JSON rendering. */
struct Report {
    std::string suite;
    nlohmann::json params = nlohmann::json::object();
    std::vector<Check> checks;

    void add(Check c) { checks.push_back(std::move(c)); }
    void add(std::string id, std::string ref, bool ok, std::string lhs, std::string rhs) {
        checks.push_back({std::move(id), std::move(ref), ok ? Status::Pass : Status::Fail,
                          std::move(lhs), std::move(rhs), 0.0});
    }
    void append(const Report& o) {
        checks.insert(checks.end(), o.checks.begin(), o.checks.end());
    }
    size_t count(Status s) const {
        return static_cast<size_t>(std::count_if(checks.begin(), checks.end(),
                                                 [&](const Check& c) { return c.status == s; }));
    }
    bool ok() const { return count(Status::Fail) == 0; }
    bool all_pass() const { return ok() && !checks.empty(); }

    nlohmann::json to_json(bool timings) const {
        using nlohmann::json;
        std::vector<Check> sorted = checks;
        std::stable_sort(sorted.begin(), sorted.end(),
                         [](const Check& a, const Check& b) { return a.id < b.id; });
        json arr = json::array();
        for (const auto& c : sorted) {
            json j;
            j["id"] = c.id;
            j["paper_ref"] = c.paper_ref;
            j["status"] = status_name(c.status);
            j["lhs"] = c.lhs;
            j["rhs"] = c.rhs;
            j["elapsed_ms"] = timings ? c.elapsed_ms : 0.0;
            arr.push_back(std::move(j));
        }
        json out;
        out["suite"] = suite;
        out["params"] = params;
        out["checks"] = std::move(arr);
        out["summary"] = {{"total", checks.size()},
                          {"pass", count(Status::Pass)},
                          {"pass_probabilistic", count(Status::PassProbabilistic)},
                          {"fail", count(Status::Fail)},
                          {"skipped", count(Status::Skipped)}};
        return out;
    }
};

/** \brief Wall-clock stopwatch in milliseconds. */
class Stopwatch {
public:
    Stopwatch() : t0_(std::chrono::steady_clock::now()) {}
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0_)
            .count();
    }

private:
    std::chrono::steady_clock::time_point t0_;
};

template <class Range>
std::string render_list(const Range& r) {
    std::ostringstream os;
    os << '[';
    bool first = true;
    for (const auto& v : r) {
        if (!first) os << ',';
        os << v;
        first = false;
    }
    os << ']';
    return os.str();
}

}  // namespace wpl

#endif
