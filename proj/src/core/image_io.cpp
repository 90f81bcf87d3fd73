#include "core/image_io.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "core/text.hpp"

namespace vaporstore {

namespace {

constexpr int kMaxVal = 65535;

double parse_csv_double(const std::string& cell, std::size_t line_no, const std::string& path) {
  const char* begin = cell.c_str();
  char* end = nullptr;
  double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0' || !std::isfinite(v))
    fail(ErrorCode::format, path + ": malformed number '" + cell + "' on line " + std::to_string(line_no));
  return v;
}

}  // namespace

void write_file_atomic(const std::string& path, const std::string& content) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::io, "cannot open '" + tmp + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) fail(ErrorCode::io, "write to '" + tmp + "' failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) fail(ErrorCode::io, "rename '" + tmp + "' -> '" + path + "' failed: " + ec.message());
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::io, "cannot open '" + path + "'");
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) fail(ErrorCode::io, "read from '" + path + "' failed");
  return content;
}

void write_image(const Image& img, const std::string& path) {
  if (img.nx < 1 || img.ny < 1 || img.values.size() != static_cast<std::size_t>(img.nx) * img.ny)
    fail(ErrorCode::shape, "image dimensions are inconsistent");
  double lo = img.values[0], hi = img.values[0];
  for (double v : img.values) {
    if (!std::isfinite(v)) fail(ErrorCode::domain, "image values must be finite");
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  double span = hi - lo;

  std::string data = "P5\n" + std::to_string(img.nx) + " " + std::to_string(img.ny) + "\n" +
                     std::to_string(kMaxVal) + "\n";
  data.reserve(data.size() + 2 * img.values.size());
  for (int iy = img.ny - 1; iy >= 0; --iy) {
    for (int ix = 0; ix < img.nx; ++ix) {
      long code = span > 0.0 ? std::lround((img.at(ix, iy) - lo) / span * kMaxVal) : 0;
      data.push_back(static_cast<char>((code >> 8) & 0xff));
      data.push_back(static_cast<char>(code & 0xff));
    }
  }
  write_file_atomic(path, data);
  write_file_atomic(path + ".scale",
                    "min " + format_double(lo) + "\nmax " + format_double(hi) + "\n");
}

Image read_image(const std::string& path) {
  std::string data = read_file(path);
  std::size_t pos = 0;
  auto next_token = [&]() -> std::string {
    while (pos < data.size()) {
      if (std::isspace(static_cast<unsigned char>(data[pos]))) {
        ++pos;
      } else if (data[pos] == '#') {
        while (pos < data.size() && data[pos] != '\n') ++pos;
      } else {
        break;
      }
    }
    std::size_t start = pos;
    while (pos < data.size() && !std::isspace(static_cast<unsigned char>(data[pos]))) ++pos;
    if (start == pos) fail(ErrorCode::format, path + ": truncated PGM header");
    return data.substr(start, pos - start);
  };

  if (next_token() != "P5") fail(ErrorCode::format, path + ": not a binary PGM file");
  int nx = std::atoi(next_token().c_str());
  int ny = std::atoi(next_token().c_str());
  int maxval = std::atoi(next_token().c_str());
  if (nx < 1 || ny < 1) fail(ErrorCode::format, path + ": bad PGM dimensions");
  if (maxval != kMaxVal) fail(ErrorCode::format, path + ": expected a 16-bit PGM (maxval 65535)");
  ++pos;  // single whitespace after the header
  if (data.size() - pos < 2 * static_cast<std::size_t>(nx) * ny)
    fail(ErrorCode::format, path + ": PGM payload is truncated");

  Image img(nx, ny);
  for (int iy = ny - 1; iy >= 0; --iy)
    for (int ix = 0; ix < nx; ++ix) {
      unsigned hi_byte = static_cast<unsigned char>(data[pos++]);
      unsigned lo_byte = static_cast<unsigned char>(data[pos++]);
      img.at(ix, iy) = static_cast<double>((hi_byte << 8) | lo_byte);
    }

  std::string sidecar = path + ".scale";
  if (std::filesystem::exists(sidecar)) {
    std::string scale = read_file(sidecar);
    double lo = 0.0, hi = 0.0;
    if (std::sscanf(scale.c_str(), "min %lf max %lf", &lo, &hi) != 2)
      fail(ErrorCode::format, sidecar + ": malformed scale sidecar");
    double span = hi - lo;
    for (double& v : img.values) v = lo + v / kMaxVal * span;
  }
  return img;
}

void write_curve_csv(const VisibilityCurve& curve, const std::string& path) {
  curve.validate();
  std::string out = "tau_us,visibility\n";
  for (const CurvePoint& p : curve.points)
    out += format_double(p.tau * 1e6, 9) + "," + format_double(p.visibility, 9) + "\n";
  write_file_atomic(path, out);
}

VisibilityCurve read_curve_csv(const std::string& path) {
  std::vector<std::string> lines = split(read_file(path), '\n');
  VisibilityCurve curve;
  bool header_seen = false;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string line = trim(lines[i]);
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != "tau_us,visibility")
        fail(ErrorCode::format, path + ": expected header 'tau_us,visibility', got '" + line + "'");
      header_seen = true;
      continue;
    }
    std::vector<std::string> cells = split(line, ',');
    if (cells.size() != 2)
      fail(ErrorCode::format, path + ": expected two columns on line " + std::to_string(i + 1));
    CurvePoint p;
    p.tau = parse_csv_double(trim(cells[0]), i + 1, path) * 1e-6;
    p.visibility = parse_csv_double(trim(cells[1]), i + 1, path);
    curve.points.push_back(p);
  }
  if (!header_seen) fail(ErrorCode::format, path + ": empty curve file");
  curve.validate();
  return curve;
}

void write_trace_csv(const TimeTrace& trace, const std::string& path) {
  std::string out = "time_us,input,output,segment\n";
  for (std::size_t i = 0; i < trace.time.size(); ++i)
    out += format_double(trace.time[i] * 1e6, 9) + "," + format_double(trace.input[i], 9) + "," +
           format_double(trace.output[i], 9) + "," + segment_name(trace.segment[i]) + "\n";
  write_file_atomic(path, out);
}

void write_phases_csv(const std::vector<double>& phases, const std::string& path) {
  std::string out = "region,phase_rad\n";
  for (std::size_t i = 0; i < phases.size(); ++i)
    out += std::to_string(i + 1) + "," + format_double(phases[i], 9) + "\n";
  write_file_atomic(path, out);
}

}  // namespace vaporstore
