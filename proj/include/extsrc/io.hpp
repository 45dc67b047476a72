// Artifact output: shortest round-trip CSV, ordered-key JSON metadata
// sidecars, and a deterministic parallel map for --jobs style fan-out.
#pragma once

#include <charconv>
#include <fstream>
#include <json.hpp>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "extsrc/errors.hpp"

namespace extsrc {

using ordered_json = nlohmann::ordered_json;

// shortest decimal that round-trips to the same double
inline std::string format_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline void write_csv(const std::string& path, const std::vector<std::string>& header,
                      const std::vector<std::vector<std::string>>& rows) {
    std::ofstream out(path);
    if (!out) throw NumericalError("write_csv: cannot open " + path);
    for (size_t i = 0; i < header.size(); ++i)
        out << (i ? "," : "") << header[i];
    out << "\n";
    for (const auto& row : rows) {
        for (size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
        out << "\n";
    }
}

// JSON metadata sidecar named <out>.meta.json, keys in insertion order
inline void write_meta(const std::string& out_path, const ordered_json& meta) {
    std::ofstream out(out_path + ".meta.json");
    if (!out) throw NumericalError("write_meta: cannot open " + out_path + ".meta.json");
    out << meta.dump(2) << "\n";
}

// Run fn(i) for i in [0, count) on `jobs` threads; items are independent and
// write to disjoint slots, so the result is identical for every job count.
template <typename F>
inline void parallel_for(size_t count, int jobs, F&& fn) {
    if (jobs <= 0) jobs = static_cast<int>(std::thread::hardware_concurrency());
    if (jobs < 1) jobs = 1;
    if (jobs == 1 || count <= 1) {
        for (size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::exception_ptr err;
    std::mutex err_mx;
    for (int w = 0; w < jobs; ++w)
        pool.emplace_back([&, w] {
            try {
                for (size_t i = w; i < count; i += jobs) fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mx);
                if (!err) err = std::current_exception();
            }
        });
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
}

}  // namespace extsrc
