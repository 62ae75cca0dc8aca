#include "alphaseed/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "alphaseed/errors.hpp"

namespace alphaseed {

int FoldPlan::fold_size(int fold) const {
    return static_cast<int>(std::count(assignment.begin(), assignment.end(), fold));
}

std::vector<int> FoldPlan::fold_ids(int fold) const {
    std::vector<int> ids;
    for (int id = 0; id < static_cast<int>(assignment.size()); ++id)
        if (assignment[static_cast<std::size_t>(id)] == fold) ids.push_back(id);
    return ids;
}

namespace {

[[noreturn]] void fail_line(int line_no, const std::string& what) {
    throw ParseError("line " + std::to_string(line_no) + ": " + what);
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

bool parse_double(std::string_view tok, double& out) {
    const char* first = tok.data();
    const char* last = tok.data() + tok.size();
    if (!tok.empty() && tok.front() == '+') ++first; // from_chars rejects leading '+'
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

struct RawLine {
    std::string label_token;
    double label_value = 0.0;
    std::vector<Feature> features;
    int line_no = 0;
};

} // namespace

std::map<std::string, int> map_labels(const std::vector<std::string>& raw_labels) {
    std::set<std::string> distinct(raw_labels.begin(), raw_labels.end());
    if (distinct.size() != 2)
        throw ConfigError("binary classification requires exactly 2 distinct labels, got " +
                          std::to_string(distinct.size()));
    // std::set orders lexicographically; the larger token becomes +1.
    auto it = distinct.begin();
    std::map<std::string, int> mapping;
    mapping[*it] = -1;
    mapping[*std::next(it)] = +1;
    return mapping;
}

Dataset parse_dataset(std::istream& in) {
    std::vector<RawLine> lines;
    std::string line;
    int line_no = 0;
    bool all_pm1 = true;

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back(); // CRLF
        std::string_view body = trim(line);
        if (body.empty()) continue;

        RawLine raw;
        raw.line_no = line_no;

        std::size_t pos = body.find_first_of(" \t");
        std::string_view label_tok = body.substr(0, pos);
        raw.label_token = std::string(label_tok);
        if (!parse_double(label_tok, raw.label_value))
            fail_line(line_no, "invalid label \"" + raw.label_token + "\"");
        if (raw.label_value != 1.0 && raw.label_value != -1.0) all_pm1 = false;

        std::string_view rest = pos == std::string_view::npos ? std::string_view{} : body.substr(pos);
        int prev_dim = 0;
        while (true) {
            rest = trim(rest);
            if (rest.empty()) break;
            std::size_t end = rest.find_first_of(" \t");
            std::string_view tok = rest.substr(0, end);
            rest = end == std::string_view::npos ? std::string_view{} : rest.substr(end);

            std::size_t colon = tok.find(':');
            if (colon == std::string_view::npos)
                fail_line(line_no, "expected dim:value, got \"" + std::string(tok) + "\"");
            int dim = 0;
            auto [dptr, dec] = std::from_chars(tok.data(), tok.data() + colon, dim);
            if (dec != std::errc() || dptr != tok.data() + colon || dim <= 0)
                fail_line(line_no, "invalid feature index \"" + std::string(tok.substr(0, colon)) + "\"");
            if (dim <= prev_dim)
                fail_line(line_no, "non-increasing feature index " + std::to_string(dim));
            double value = 0.0;
            if (!parse_double(tok.substr(colon + 1), value))
                fail_line(line_no, "invalid feature value \"" + std::string(tok.substr(colon + 1)) + "\"");
            raw.features.push_back(Feature{dim, value});
            prev_dim = dim;
        }
        lines.push_back(std::move(raw));
    }

    // Resolve labels: +1/-1 pass through, anything else needs a 2-token remap.
    std::map<std::string, int> mapping;
    if (!all_pm1) {
        std::vector<std::string> tokens;
        tokens.reserve(lines.size());
        for (const auto& raw : lines) tokens.push_back(raw.label_token);
        try {
            mapping = map_labels(tokens);
        } catch (const ConfigError&) {
            for (const auto& raw : lines)
                if (raw.label_value != 1.0 && raw.label_value != -1.0)
                    fail_line(raw.line_no, "invalid label \"" + raw.label_token + "\"");
        }
    }

    Dataset ds;
    ds.instances.reserve(lines.size());
    for (auto& raw : lines) {
        Instance inst;
        inst.id = static_cast<int>(ds.instances.size());
        inst.label = all_pm1 ? (raw.label_value > 0 ? +1 : -1) : mapping.at(raw.label_token);
        inst.features = std::move(raw.features);
        if (!inst.features.empty()) ds.max_dim = std::max(ds.max_dim, inst.features.back().dim);
        ds.instances.push_back(std::move(inst));
    }
    return ds;
}

Dataset parse_dataset_string(const std::string& text) {
    std::istringstream in(text);
    return parse_dataset(in);
}

Dataset load_dataset(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open dataset file: " + path);
    return parse_dataset(in);
}

std::string serialize_dataset(const Dataset& ds) {
    std::string out;
    char buf[64];
    for (const auto& inst : ds.instances) {
        out += inst.label > 0 ? "+1" : "-1";
        for (const auto& f : inst.features) {
            std::snprintf(buf, sizeof(buf), " %d:%.17g", f.dim, f.value);
            out += buf;
        }
        out += '\n';
    }
    return out;
}

FoldPlan make_folds(const Dataset& ds, int k, std::uint64_t seed) {
    const int n = ds.size();
    if (k < 3) throw ConfigError("k must be >= 3");
    if (k > n) throw ConfigError("k must not exceed the instance count (" + std::to_string(n) + ")");

    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    // Explicit Fisher-Yates; std::shuffle is not bit-stable across libraries.
    std::mt19937_64 rng(seed);
    for (int i = n - 1; i > 0; --i) {
        const auto j = static_cast<int>(rng() % static_cast<std::uint64_t>(i + 1));
        std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
    }

    FoldPlan plan;
    plan.k = k;
    plan.seed = seed;
    plan.assignment.resize(static_cast<std::size_t>(n));
    for (int pos = 0; pos < n; ++pos)
        plan.assignment[static_cast<std::size_t>(order[static_cast<std::size_t>(pos)])] = pos % k;
    return plan;
}

FoldPlan make_loocv_plan(const Dataset& ds) {
    const int n = ds.size();
    if (n < 3) throw ConfigError("leave-one-out needs at least 3 instances");
    FoldPlan plan;
    plan.k = n;
    plan.seed = 0;
    plan.assignment.resize(static_cast<std::size_t>(n));
    std::iota(plan.assignment.begin(), plan.assignment.end(), 0);
    return plan;
}

} // namespace alphaseed
