#pragma once

#include <string>
#include <vector>

#include "cbet/eval.hpp"

namespace cbet {

void ensure_dir(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

// Episode metrics CSV: one row per episode, fixed header, exact float
// formatting (reruns with the same config and seed are byte-identical).
std::string metrics_csv_header();
std::string metrics_csv_row(uint64_t index, const EpisodeRecord& record);

class MetricsCsvWriter {
  public:
    explicit MetricsCsvWriter(const std::string& path);
    void add(const EpisodeRecord& record);

  private:
    std::string path_;
    std::string body_;
    uint64_t index_ = 0;

  public:
    void flush();
    ~MetricsCsvWriter();
};

void write_trend_csv(const std::string& path, const std::vector<double>& trend, size_t window);

// Plain-text pixmap (P3). Zero counts render white, hotter cells darker red;
// wall cells of the reference grid render grey.
void write_ppm(const std::string& path, const Heatmap& hm,
               const WorldState* reference = nullptr);

}  // namespace cbet
