#include "nmrdiscord/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "nmrdiscord/errors.hpp"

namespace nmrdiscord {

namespace {

[[noreturn]] void field_error(const std::string& path, const std::string& msg) {
  throw ParseError("ParseError: " + path + ": " + msg);
}

void read_block(const nlohmann::json& j, const char* name, ComplexMatrix& m, bool imag) {
  if (!j.contains(name)) field_error(name, "missing");
  const nlohmann::json& rows = j.at(name);
  if (!rows.is_array() || rows.size() != 4) field_error(name, "expected an array of 4 rows");
  for (int r = 0; r < 4; ++r) {
    const std::string rpath = std::string(name) + "[" + std::to_string(r) + "]";
    const nlohmann::json& row = rows[r];
    if (!row.is_array() || row.size() != 4) field_error(rpath, "expected an array of 4 numbers");
    for (int c = 0; c < 4; ++c) {
      const nlohmann::json& v = row[c];
      const std::string cpath = rpath + "[" + std::to_string(c) + "]";
      if (!v.is_number()) field_error(cpath, "expected a number");
      const double x = v.get<double>();
      if (!std::isfinite(x)) field_error(cpath, "not finite");
      if (imag) {
        m(r, c).imag(x);
      } else {
        m(r, c).real(x);
      }
    }
  }
}

}  // namespace

StateFile state_file_from_json(const nlohmann::json& j) {
  if (!j.is_object()) field_error("$", "expected a JSON object");
  for (const auto& item : j.items()) {
    const std::string& k = item.key();
    if (k != "dims" && k != "re" && k != "im" && k != "metadata") field_error(k, "unknown field");
  }
  if (!j.contains("dims")) field_error("dims", "missing");
  if (!j.at("dims").is_number_integer() || j.at("dims").get<long long>() != 4) {
    field_error("dims", "must be the integer 4");
  }
  StateFile f;
  read_block(j, "re", f.matrix, false);
  read_block(j, "im", f.matrix, true);
  if (j.contains("metadata")) {
    if (!j.at("metadata").is_object()) field_error("metadata", "expected an object");
    f.metadata = j.at("metadata");
  }
  return f;
}

nlohmann::json state_file_to_json(const StateFile& f) {
  if (f.matrix.rows() != 4 || f.matrix.cols() != 4) {
    throw DimMismatch("state_file_to_json: matrix must be 4 x 4");
  }
  nlohmann::json re = nlohmann::json::array(), im = nlohmann::json::array();
  for (int r = 0; r < 4; ++r) {
    nlohmann::json rr = nlohmann::json::array(), ir = nlohmann::json::array();
    for (int c = 0; c < 4; ++c) {
      rr.push_back(f.matrix(r, c).real());
      ir.push_back(f.matrix(r, c).imag());
    }
    re.push_back(rr);
    im.push_back(ir);
  }
  return {{"dims", 4}, {"re", re}, {"im", im}, {"metadata", f.metadata}};
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("ParseError: cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

StateFile read_state_file(const std::string& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_text_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("ParseError: " + path + ": " + e.what());
  }
  return state_file_from_json(j);
}

void write_state_file(const std::string& path, const StateFile& f) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("ParseError: cannot write " + path);
  // nlohmann prints doubles with round-trip precision.
  out << state_file_to_json(f).dump(2) << '\n';
}

DensityMatrix load_state(const std::string& path, double tol) {
  return validate_density(read_state_file(path).matrix, tol);
}

FidelitySeries parse_fidelity_csv(const std::string& text, SeriesKind kind) {
  FidelitySeries s;
  s.kind = kind;
  std::istringstream in(text);
  std::string line;
  int number = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      if (line != "t_seconds,value") {
        throw ParseError("ParseError: line " + std::to_string(number) +
                         ": expected header 't_seconds,value'");
      }
      header = true;
      continue;
    }
    const std::size_t comma = line.find(',');
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos) {
      throw ParseError("ParseError: line " + std::to_string(number) + ": expected two columns");
    }
    FidelityPoint p;
    const auto field = [&](std::string_view tok, double& out, const char* col) {
      while (!tok.empty() && tok.front() == ' ') tok.remove_prefix(1);
      while (!tok.empty() && tok.back() == ' ') tok.remove_suffix(1);
      const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), out);
      if (res.ec != std::errc() || res.ptr != tok.data() + tok.size() || !std::isfinite(out)) {
        throw ParseError("ParseError: line " + std::to_string(number) + ": bad " + col + " '" +
                         std::string(tok) + "'");
      }
    };
    field(std::string_view(line).substr(0, comma), p.t, "t_seconds");
    field(std::string_view(line).substr(comma + 1), p.value, "value");
    s.points.push_back(p);
  }
  if (!header) throw ParseError("ParseError: missing header 't_seconds,value'");
  s.validate();
  return s;
}

FidelitySeries read_fidelity_csv(const std::string& path, SeriesKind kind) {
  return parse_fidelity_csv(read_text_file(path), kind);
}

std::string format_fidelity_csv(const FidelitySeries& s) {
  std::ostringstream os;
  os << std::setprecision(std::numeric_limits<double>::max_digits10);
  os << "t_seconds,value\n";
  for (const auto& p : s.points) os << p.t << ',' << p.value << '\n';
  return os.str();
}

}  // namespace nmrdiscord
