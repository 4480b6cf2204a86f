#include "cbet/artifacts.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cbet/checkpoint.hpp"
#include "cbet/errors.hpp"

namespace cbet {

void ensure_dir(const std::string& path) {
    std::error_code ec;
    std::filesystem::create_directories(path, ec);
    if (ec) throw CbetError("cannot create directory " + path + ": " + ec.message());
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw CbetError("cannot write file: " + path);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
}

std::string metrics_csv_header() {
    return "episode,family,episode_seed,steps,outcome,extrinsic_return,intrinsic_raw_sum,"
           "interactions\n";
}

std::string metrics_csv_row(uint64_t index, const EpisodeRecord& record) {
    double extrinsic = 0.0;
    double intrinsic = 0.0;
    uint64_t interactions = 0;
    for (const StepLog& s : record.steps) {
        extrinsic += s.extrinsic;
        intrinsic += s.intrinsic_raw;
        if (s.interaction) ++interactions;
    }
    const char* outcome = record.outcome == DoneReason::Solved ? "solved"
                          : record.outcome == DoneReason::Timeout ? "timeout"
                                                                  : "partial";
    std::ostringstream os;
    os << index << ',' << family_name(record.family) << ',' << record.episode_seed << ','
       << record.steps.size() << ',' << outcome << ',' << format_double(extrinsic) << ','
       << format_double(intrinsic) << ',' << interactions << '\n';
    return os.str();
}

MetricsCsvWriter::MetricsCsvWriter(const std::string& path) : path_(path) {
    body_ = metrics_csv_header();
}

void MetricsCsvWriter::add(const EpisodeRecord& record) {
    body_ += metrics_csv_row(index_++, record);
}

void MetricsCsvWriter::flush() {
    if (!path_.empty()) write_text_file(path_, body_);
}

MetricsCsvWriter::~MetricsCsvWriter() {
    try {
        flush();
    } catch (...) {
        // Destructor must not throw; callers that care invoke flush() directly.
    }
}

void write_trend_csv(const std::string& path, const std::vector<double>& trend, size_t window) {
    std::string body = "window,step_end,mean_intrinsic_raw\n";
    for (size_t i = 0; i < trend.size(); ++i) {
        body += std::to_string(i) + "," + std::to_string((i + 1) * window) + "," +
                format_double(trend[i]) + "\n";
    }
    write_text_file(path, body);
}

void write_ppm(const std::string& path, const Heatmap& hm, const WorldState* reference) {
    uint64_t max_count = 0;
    for (uint64_t c : hm.counts) max_count = std::max(max_count, c);
    std::ostringstream os;
    os << "P3\n" << hm.cols << ' ' << hm.rows << "\n255\n";
    for (int r = 0; r < hm.rows; ++r) {
        for (int c = 0; c < hm.cols; ++c) {
            int red = 255, green = 255, blue = 255;
            const bool wall = reference && reference->rows == hm.rows &&
                              reference->cols == hm.cols &&
                              reference->at({r, c}).kind == Kind::Wall;
            const uint64_t count = hm.counts[static_cast<size_t>(r) * hm.cols + c];
            if (wall) {
                red = green = blue = 96;
            } else if (count > 0 && max_count > 0) {
                const double frac = static_cast<double>(count) / static_cast<double>(max_count);
                green = blue = static_cast<int>(235.0 * (1.0 - frac));
            }
            os << red << ' ' << green << ' ' << blue << (c + 1 == hm.cols ? "" : " ");
        }
        os << '\n';
    }
    write_text_file(path, os.str());
}

}  // namespace cbet
