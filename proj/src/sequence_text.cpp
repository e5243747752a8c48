#include "nmrdiscord/sequence_text.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>

#include "nmrdiscord/errors.hpp"

namespace nmrdiscord {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

class LineReader {
 public:
  LineReader(std::string_view line, int number) : number_(number) {
    std::istringstream is{std::string(line)};
    std::string tok;
    while (is >> tok) tokens_.push_back(tok);
  }

  bool done() const { return pos_ >= tokens_.size(); }

  std::string word(const char* what) {
    if (done()) fail(std::string("expected ") + what);
    return lower(tokens_[pos_++]);
  }

  std::optional<std::string> peek() const {
    if (done()) return std::nullopt;
    return lower(tokens_[pos_]);
  }

  double number(const char* what) {
    if (done()) fail(std::string("expected ") + what);
    const std::string& tok = tokens_[pos_];
    double v = 0.0;
    const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size() || !std::isfinite(v)) {
      fail("'" + tok + "' is not a finite number (" + what + ")");
    }
    ++pos_;
    return v;
  }

  double angle(const char* what) {
    const double v = number(what);
    const std::string unit = word("angle unit (deg or rad)");
    if (unit == "deg") return v * std::numbers::pi / 180.0;
    if (unit == "rad") return v;
    fail("unknown angle unit '" + unit + "'");
  }

  double duration(const char* what) {
    const double v = number(what);
    if (v < 0.0) fail("duration must be >= 0");
    const std::string unit = word("time unit (s, ms or us)");
    if (unit == "s") return v;
    if (unit == "ms") return v * 1e-3;
    if (unit == "us") return v * 1e-6;
    fail("unknown time unit '" + unit + "'");
  }

  void finish() {
    if (!done()) fail("unexpected trailing token '" + tokens_[pos_] + "'");
  }

  [[noreturn]] void fail(const std::string& msg) const {
    std::ostringstream os;
    os << "ParseError: line " << number_ << ": " << msg;
    throw ParseError(os.str());
  }

 private:
  std::vector<std::string> tokens_;
  std::size_t pos_ = 0;
  int number_;
};

SequenceEvent parse_line(LineReader& in) {
  const std::string kind = in.word("event keyword");
  if (kind == "pulse") {
    Pulse p;
    const std::string target = in.word("pulse target (A, B or both)");
    if (target == "a") {
      p.target = Target::A;
    } else if (target == "b") {
      p.target = Target::B;
    } else if (target == "both") {
      p.target = Target::Both;
    } else {
      in.fail("unknown pulse target '" + target + "'");
    }
    p.angle = in.angle("pulse angle");
    if (in.peek() == std::optional<std::string>("phase")) {
      in.word("phase");
      p.phase = in.angle("pulse phase");
    }
    in.finish();
    return p;
  }
  if (kind == "delay") {
    Delay d;
    d.duration = in.duration("delay duration");
    if (!in.done()) {
      const std::string mode = in.word("coupling mode");
      if (mode == "zz") {
        d.mode = CouplingMode::ZZ;
      } else if (mode == "isotropic") {
        d.mode = CouplingMode::Isotropic;
      } else {
        in.fail("unknown coupling mode '" + mode + "'");
      }
    }
    in.finish();
    return d;
  }
  if (kind == "grad") {
    in.finish();
    return Gradient{};
  }
  if (kind == "spinlock") {
    SpinLock s;
    s.duration = in.duration("spin-lock duration");
    in.finish();
    return s;
  }
  in.fail("unknown event '" + kind + "'");
}

const char* target_name(Target t) {
  switch (t) {
    case Target::A:
      return "A";
    case Target::B:
      return "B";
    case Target::Both:
      break;
  }
  return "both";
}

}  // namespace

std::vector<SequenceEvent> parse_sequence(std::string_view text) {
  std::vector<SequenceEvent> events;
  int number = 0;
  while (!text.empty() || number == 0) {
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++number;
    if (const std::size_t hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    LineReader in(line, number);
    if (!in.done()) events.push_back(parse_line(in));
    if (text.empty()) break;
  }
  return events;
}

std::string format_sequence(const std::vector<SequenceEvent>& events) {
  std::ostringstream os;
  os << std::setprecision(std::numeric_limits<double>::max_digits10);
  const double to_deg = 180.0 / std::numbers::pi;
  for (const SequenceEvent& ev : events) {
    if (const auto* p = std::get_if<Pulse>(&ev)) {
      os << "pulse " << target_name(p->target) << ' ' << p->angle * to_deg << " deg phase "
         << p->phase * to_deg << " deg\n";
    } else if (const auto* d = std::get_if<Delay>(&ev)) {
      os << "delay " << d->duration << " s " << (d->mode == CouplingMode::ZZ ? "zz" : "isotropic")
         << '\n';
    } else if (std::holds_alternative<Gradient>(ev)) {
      os << "grad\n";
    } else {
      os << "spinlock " << std::get<SpinLock>(ev).duration << " s\n";
    }
  }
  return os.str();
}

}  // namespace nmrdiscord
