#include "ptl/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace ptl {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void write_instance_csv(std::ostream& os, const PairSet& A) {
  os << "px,py,vx,vy,b\n";
  for (std::size_t i = 0; i < A.size(); ++i) {
    const auto& p = A.points[i];
    const auto& l = A.lines[i];
    os << format_double(p.x()) << ',' << format_double(p.y()) << ',' << format_double(l.normal.x())
       << ',' << format_double(l.normal.y()) << ',' << format_double(l.offset) << '\n';
  }
}

void write_weighted_csv(std::ostream& os, const WeightedPairSet& A, const std::vector<double>* coreset_u) {
  os << (coreset_u ? "px,py,vx,vy,b,w,u\n" : "px,py,vx,vy,b,w\n");
  for (std::size_t i = 0; i < A.size(); ++i) {
    const auto& p = A.pairs.points[i];
    const auto& l = A.pairs.lines[i];
    os << format_double(p.x()) << ',' << format_double(p.y()) << ',' << format_double(l.normal.x())
       << ',' << format_double(l.normal.y()) << ',' << format_double(l.offset) << ','
       << format_double(A.weights[i]);
    if (coreset_u) os << ',' << format_double((*coreset_u)[i]);
    os << '\n';
  }
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

double parse_number(const std::string& s) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("");
    return x;
  } catch (const std::exception&) {
    throw std::invalid_argument("malformed number '" + s + "'");
  }
}

}  // namespace

LoadedInstance read_instance_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::invalid_argument("instance csv: empty input");
  const auto header = split_csv(line);
  const std::vector<std::string> base = {"px", "py", "vx", "vy", "b"};
  if (header.size() < base.size()) throw std::invalid_argument("instance csv: bad header");
  for (std::size_t i = 0; i < base.size(); ++i)
    if (header[i] != base[i]) throw std::invalid_argument("instance csv: header must start px,py,vx,vy,b");
  const bool has_w = header.size() >= 6 && header[5] == "w";
  const bool has_u = header.size() >= 7 && header[6] == "u";
  if (header.size() > 5 && !has_w) throw std::invalid_argument("instance csv: unknown column layout");

  LoadedInstance out;
  if (has_w) out.weights.emplace();
  if (has_u) out.coreset.emplace();
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != header.size()) throw std::invalid_argument("instance csv: wrong field count");
    const Vec2 p(parse_number(f[0]), parse_number(f[1]));
    const auto l = PlanarLine::from(Vec2(parse_number(f[2]), parse_number(f[3])), parse_number(f[4]));
    out.pairs.push_back(p, l);
    if (has_w) out.weights->push_back(parse_number(f[5]));
    if (has_u) out.coreset->push_back(parse_number(f[6]));
  }
  if (out.pairs.empty()) throw std::invalid_argument("instance csv: no records");
  return out;
}

std::string instance_to_json(const PairSet& A, const std::vector<double>* weights) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < A.size(); ++i) {
    nlohmann::json row = {{"px", A.points[i].x()},
                          {"py", A.points[i].y()},
                          {"vx", A.lines[i].normal.x()},
                          {"vy", A.lines[i].normal.y()},
                          {"b", A.lines[i].offset}};
    if (weights) row["w"] = (*weights)[i];
    rows.push_back(row);
  }
  return nlohmann::json{{"pairs", rows}}.dump();
}

LoadedInstance instance_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  LoadedInstance out;
  for (const auto& row : j.at("pairs")) {
    out.pairs.push_back(Vec2(row.at("px").get<double>(), row.at("py").get<double>()),
                        PlanarLine::from(Vec2(row.at("vx").get<double>(), row.at("vy").get<double>()),
                                         row.at("b").get<double>()));
    if (row.contains("w")) {
      if (!out.weights) out.weights.emplace();
      out.weights->push_back(row.at("w").get<double>());
    }
  }
  if (out.pairs.empty()) throw std::invalid_argument("instance json: no pairs");
  if (out.weights && out.weights->size() != out.pairs.size())
    throw std::invalid_argument("instance json: partial weight column");
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write '" + path + "'");
  out << text;
}

LoadedInstance load_instance_file(const std::string& path) {
  if (path.size() >= 5 && path.substr(path.size() - 5) == ".json")
    return instance_from_json(read_text_file(path));
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open '" + path + "'");
  return read_instance_csv(in);
}

void save_instance_file(const std::string& path, const PairSet& A, const std::vector<double>* weights) {
  if (path.size() >= 5 && path.substr(path.size() - 5) == ".json") {
    write_text_file(path, instance_to_json(A, weights));
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write '" + path + "'");
  if (weights) {
    WeightedPairSet w{A, *weights};
    write_weighted_csv(out, w);
  } else {
    write_instance_csv(out, A);
  }
}

std::string alignment_to_json(const Alignment& a) {
  return nlohmann::json{{"theta", a.angle()}, {"t", {a.translation.x(), a.translation.y()}}}.dump();
}

Alignment alignment_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  const auto t = j.at("t");
  return Alignment::from_angle(j.at("theta").get<double>(),
                               Vec2(t.at(0).get<double>(), t.at(1).get<double>()));
}

std::string match_result_to_json(const MatchResult& r) {
  return nlohmann::json{{"theta", r.alignment.angle()},
                        {"t", {r.alignment.translation.x(), r.alignment.translation.y()}},
                        {"pi", r.permutation},
                        {"cost", r.cost},
                        {"mode", r.mode == MatchMode::Exact ? "exact" : "sampled"}}
      .dump();
}

std::optional<std::tuple<PlanarPoint, PlanarLine, double>> parse_stream_record(const std::string& line) {
  if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) return std::nullopt;
  const auto f = split_csv(line);
  if (f.size() != 6) throw std::invalid_argument("stream record needs px,py,vx,vy,b,w");
  return std::make_tuple(Vec2(parse_number(f[0]), parse_number(f[1])),
                         PlanarLine::from(Vec2(parse_number(f[2]), parse_number(f[3])), parse_number(f[4])),
                         parse_number(f[5]));
}

void write_manifest(const std::string& path, const std::string& command, const std::string& config_json,
                    std::uint64_t seed) {
  nlohmann::json j{{"tool", "ptl"},
                   {"version", kToolVersion},
                   {"command", command},
                   {"seed", seed},
                   {"config", nlohmann::json::parse(config_json)}};
  write_text_file(path, j.dump(2) + "\n");
}

}  // namespace ptl
