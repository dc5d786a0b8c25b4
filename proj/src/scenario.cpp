// Copyright 2026 The Artiprop Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "artiprop/scenario.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <numbers>
#include <set>
#include <sstream>

#include "artiprop/errors.hpp"

namespace artiprop {
namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

// ---------------------------------------------------------------------------
// Lexing

class LineCursor {
 public:
  LineCursor(std::string_view line, int line_no) : s_(line), line_(line_no) {}

  void skipSpace() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t' ||
                                s_[pos_] == '\r')) {
      ++pos_;
    }
  }
  bool atEnd() {
    skipSpace();
    return pos_ >= s_.size() || s_[pos_] == '#';
  }
  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  int column() const { return static_cast<int>(pos_) + 1; }

  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(message, line_, column());
  }

  std::string key() {
    skipSpace();
    const std::size_t start = pos_;
    if (!(std::isalpha(static_cast<unsigned char>(peek())) || peek() == '_')) {
      fail("expected a key");
    }
    while (pos_ < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[pos_])) ||
            s_[pos_] == '_' || s_[pos_] == '.')) {
      ++pos_;
    }
    const std::string k(s_.substr(start, pos_ - start));
    if (k.back() == '.' || k.find("..") != std::string::npos) {
      pos_ = start;
      fail("malformed key '" + k + "'");
    }
    return k;
  }

  void expect(char c) {
    skipSpace();
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  double number() {
    skipSpace();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && s_[pos_] != ',' && s_[pos_] != ']' &&
           s_[pos_] != ' ' && s_[pos_] != '\t' && s_[pos_] != '#' &&
           s_[pos_] != '\r') {
      ++pos_;
    }
    const std::string tok(s_.substr(start, pos_ - start));
    double v = 0.0;
    if (!parseNumber(tok, v)) {
      pos_ = start;
      fail(tok.empty() ? "expected a number" : "invalid number '" + tok + "'");
    }
    return v;
  }

  ScenarioValue value() {
    skipSpace();
    ScenarioValue out;
    out.line = line_;
    out.column = column();
    const char c = peek();
    if (c == '[') {
      ++pos_;
      std::vector<double> items;
      skipSpace();
      if (peek() != ']') {
        while (true) {
          items.push_back(number());
          skipSpace();
          if (peek() == ',') {
            ++pos_;
            continue;
          }
          if (peek() == ']') break;
          fail("expected ',' or ']' in list");
        }
      }
      ++pos_;
      out.data = std::move(items);
    } else if (c == '"') {
      ++pos_;
      const std::size_t start = pos_;
      while (pos_ < s_.size() && s_[pos_] != '"') ++pos_;
      if (pos_ >= s_.size()) fail("unterminated string");
      out.data = std::string(s_.substr(start, pos_ - start));
      ++pos_;
    } else if (c == '\0' || c == '#') {
      fail("expected a value");
    } else {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && s_[pos_] != ' ' && s_[pos_] != '\t' &&
             s_[pos_] != '#' && s_[pos_] != '\r') {
        ++pos_;
      }
      const std::string tok(s_.substr(start, pos_ - start));
      double v = 0.0;
      if (parseNumber(tok, v)) {
        out.data = v;
      } else if (isWord(tok)) {
        out.data = tok;
      } else {
        pos_ = start;
        fail("invalid value '" + tok + "'");
      }
    }
    if (!atEnd()) fail("unexpected trailing characters");
    return out;
  }

 private:
  static bool parseNumber(const std::string& tok, double& out) {
    if (tok.empty()) return false;
    const char first = tok[0];
    if (!(std::isdigit(static_cast<unsigned char>(first)) || first == '-' ||
          first == '+' || first == '.' || first == 'i')) {
      return false;
    }
    if (tok == "inf" || tok == "+inf") {
      out = kUnlimited;
      return true;
    }
    if (tok == "-inf") {
      out = -kUnlimited;
      return true;
    }
    if (first == 'i') return false;
    char* end = nullptr;
    out = std::strtod(tok.c_str(), &end);
    return end == tok.c_str() + tok.size() && std::isfinite(out);
  }

  static bool isWord(const std::string& tok) {
    if (tok.empty() ||
        !(std::isalpha(static_cast<unsigned char>(tok[0])) || tok[0] == '_')) {
      return false;
    }
    for (char ch : tok) {
      if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' ||
            ch == '-')) {
        return false;
      }
    }
    return true;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  int line_;
};

// ---------------------------------------------------------------------------
// Typed access

[[noreturn]] void invalid(const std::string& key, const std::string& msg) {
  throw ValidationError(key, msg);
}

double asNumber(const std::string& key, const ScenarioValue& v) {
  if (const double* d = std::get_if<double>(&v.data)) return *d;
  invalid(key, "expected a number");
}

std::vector<double> asList(const std::string& key, const ScenarioValue& v,
                           std::size_t size) {
  const auto* list = std::get_if<std::vector<double>>(&v.data);
  if (list == nullptr) {
    invalid(key, "expected a list of " + std::to_string(size) + " numbers");
  }
  if (list->size() != size) {
    invalid(key, "expected " + std::to_string(size) + " numbers, got " +
                     std::to_string(list->size()));
  }
  return *list;
}

Vector3d asVector3(const std::string& key, const ScenarioValue& v) {
  const auto l = asList(key, v, 3);
  return Vector3d(l[0], l[1], l[2]);
}

Vector6d asVector6(const std::string& key, const ScenarioValue& v) {
  const auto l = asList(key, v, 6);
  Vector6d out;
  for (int i = 0; i < 6; ++i) out(i) = l[i];
  return out;
}

std::string asWord(const std::string& key, const ScenarioValue& v) {
  if (const auto* s = std::get_if<std::string>(&v.data)) return *s;
  invalid(key, "expected a word");
}

std::int64_t asInteger(const std::string& key, const ScenarioValue& v) {
  const double d = asNumber(key, v);
  if (d != std::floor(d) || std::abs(d) > 9.007199254740992e15) {
    invalid(key, "must be an integer");
  }
  return static_cast<std::int64_t>(d);
}

std::string fmt(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

template <typename Vec>
std::string fmtList(const Vec& v) {
  std::string out = "[";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += fmt(v(i));
  }
  return out + "]";
}

// ---------------------------------------------------------------------------
// Key table. Order matters: the joint type is read before anything whose
// unit depends on it, and defaults that derive from other keys are resolved
// after the table.

struct KeySpec {
  std::string name;
  std::function<void(Scenario&, const std::string&, const ScenarioValue&)> read;
  std::function<std::string(const Scenario&)> write;
};

bool rotating(const Scenario& s) {
  return s.object.type != JointType::kPrismatic;
}
double jointUnit(const Scenario& s) { return rotating(s) ? kDeg : 1.0; }

const std::vector<KeySpec>& keyTable() {
  static const std::vector<KeySpec> table = [] {
    std::vector<KeySpec> t;
    auto number = [&t](std::string name, auto member, double unit = 1.0) {
      t.push_back({name,
                   [member, unit](Scenario& s, const std::string& k,
                                  const ScenarioValue& v) {
                     member(s) = asNumber(k, v) * unit;
                   },
                   [member, unit](const Scenario& s) {
                     return fmt(member(const_cast<Scenario&>(s)) / unit);
                   }});
    };
    auto joint_number = [&t](std::string name, auto member) {
      t.push_back({name,
                   [member](Scenario& s, const std::string& k,
                            const ScenarioValue& v) {
                     member(s) = asNumber(k, v) * jointUnit(s);
                   },
                   [member](const Scenario& s) {
                     return fmt(member(const_cast<Scenario&>(s)) /
                                jointUnit(s));
                   }});
    };
    auto vec3 = [&t](std::string name, auto member, double unit = 1.0) {
      t.push_back({name,
                   [member, unit](Scenario& s, const std::string& k,
                                  const ScenarioValue& v) {
                     member(s) = asVector3(k, v) * unit;
                   },
                   [member, unit](const Scenario& s) {
                     return fmtList(
                         Vector3d(member(const_cast<Scenario&>(s)) / unit));
                   }});
    };

    t.push_back({"name",
                 [](Scenario& s, const std::string& k, const ScenarioValue& v) {
                   s.name = asWord(k, v);
                 },
                 [](const Scenario& s) { return "\"" + s.name + "\""; }});
    t.push_back({"object.joint.type",
                 [](Scenario& s, const std::string& k, const ScenarioValue& v) {
                   const auto type = jointTypeFromString(asWord(k, v));
                   if (!type) {
                     invalid(k, "must be prismatic, revolute or helical");
                   }
                   s.object.type = *type;
                 },
                 [](const Scenario& s) {
                   return std::string(toString(s.object.type));
                 }});
    vec3("object.joint.axis_direction",
         [](Scenario& s) -> Vector3d& { return s.object.axis_direction; });
    vec3("object.joint.axis_origin",
         [](Scenario& s) -> Vector3d& { return s.object.axis_origin; });
    number("object.joint.pitch",
           [](Scenario& s) -> double& { return s.object.pitch; });
    t.push_back({"object.joint.limits",
                 [](Scenario& s, const std::string& k, const ScenarioValue& v) {
                   const auto l = asList(k, v, 2);
                   s.object.q_min = l[0] * jointUnit(s);
                   s.object.q_max = l[1] * jointUnit(s);
                 },
                 [](const Scenario& s) {
                   return fmtList(Eigen::Vector2d(s.object.q_min / jointUnit(s),
                                                  s.object.q_max / jointUnit(s)));
                 }});
    joint_number("object.joint.initial_q",
                 [](Scenario& s) -> double& { return s.object.initial_q; });
    vec3("object.zero_pose.position",
         [](Scenario& s) -> Vector3d& { return s.object.zero_position; });
    vec3("object.zero_pose.rpy",
         [](Scenario& s) -> Vector3d& { return s.object.zero_rpy; }, kDeg);
    vec3("object.handle_offset.position",
         [](Scenario& s) -> Vector3d& { return s.object.handle_position; });
    vec3("object.handle_offset.rpy",
         [](Scenario& s) -> Vector3d& { return s.object.handle_rpy; }, kDeg);
    number("object.mechanism.damping",
           [](Scenario& s) -> double& { return s.object.mech.damping; });
    number("object.mechanism.latch_breakaway",
           [](Scenario& s) -> double& { return s.object.mech.latch_breakaway; });
    joint_number("object.mechanism.latch_disengage",
                 [](Scenario& s) -> double& {
                   return s.object.mech.latch_disengage_q;
                 });
    number("object.mechanism.closing_spring_k", [](Scenario& s) -> double& {
      return s.object.mech.closing_spring_k;
    });
    joint_number("object.mechanism.closing_spring_range",
                 [](Scenario& s) -> double& {
                   return s.object.mech.closing_spring_range_q;
                 });

    number("grasp.k_couple_trans",
           [](Scenario& s) -> double& { return s.grasp.k_couple_trans; });
    number("grasp.k_couple_rot",
           [](Scenario& s) -> double& { return s.grasp.k_couple_rot; });
    number("grasp.slip_torque_limit",
           [](Scenario& s) -> double& { return s.grasp.slip_torque_limit; });
    number("grasp.slip_force_limit",
           [](Scenario& s) -> double& { return s.grasp.slip_force_limit; });
    number("grasp.slip_rot_viscosity",
           [](Scenario& s) -> double& { return s.grasp.slip_rot_viscosity; });
    number("grasp.slip_trans_viscosity",
           [](Scenario& s) -> double& { return s.grasp.slip_trans_viscosity; });
    vec3("grasp.closing_axis",
         [](Scenario& s) -> Vector3d& { return s.grasp.closing_axis; });
    vec3("grasp.handle_axis",
         [](Scenario& s) -> Vector3d& { return s.grasp.handle_axis; });
    number("grasp.handle_half_length",
           [](Scenario& s) -> double& { return s.grasp.handle_half_length; });

    number("world.force_limit",
           [](Scenario& s) -> double& { return s.force_limit; });

    auto gains = [&t](std::string name, Vector6d AdmittanceParams::*field) {
      t.push_back({name,
                   [field](Scenario& s, const std::string& k,
                           const ScenarioValue& v) {
                     s.controller.*field = asVector6(k, v);
                   },
                   [field](const Scenario& s) {
                     return fmtList(s.controller.*field);
                   }});
    };
    gains("controller.K", &AdmittanceParams::stiffness);
    gains("controller.M", &AdmittanceParams::mass);
    gains("controller.B", &AdmittanceParams::damping);
    t.push_back({"controller.frame",
                 [](Scenario& s, const std::string& k, const ScenarioValue& v) {
                   const auto f = admittanceFrameFromString(asWord(k, v));
                   if (!f) invalid(k, "must be gripper or world");
                   s.controller.frame = *f;
                 },
                 [](const Scenario& s) {
                   return std::string(toString(s.controller.frame));
                 }});

    number("runner.step_dq",
           [](Scenario& s) -> double& { return s.runner.step_dq; });
    t.push_back({"runner.poses_per_estimate",
                 [](Scenario& s, const std::string& k, const ScenarioValue& v) {
                   s.runner.poses_per_estimate =
                       static_cast<int>(asInteger(k, v));
                 },
                 [](const Scenario& s) {
                   return std::to_string(s.runner.poses_per_estimate);
                 }});
    joint_number("runner.target_q",
                 [](Scenario& s) -> double& { return s.runner.target_q; });
    t.push_back({"runner.max_steps",
                 [](Scenario& s, const std::string& k, const ScenarioValue& v) {
                   s.runner.max_steps = static_cast<int>(asInteger(k, v));
                 },
                 [](const Scenario& s) {
                   return std::to_string(s.runner.max_steps);
                 }});
    number("runner.dt", [](Scenario& s) -> double& { return s.runner.dt; });
    t.push_back({"runner.substeps_per_motion",
                 [](Scenario& s, const std::string& k, const ScenarioValue& v) {
                   s.runner.substeps_per_motion =
                       static_cast<int>(asInteger(k, v));
                 },
                 [](const Scenario& s) {
                   return std::to_string(s.runner.substeps_per_motion);
                 }});
    number("runner.success_threshold",
           [](Scenario& s) -> double& { return s.runner.success_threshold; });
    number("runner.pose_noise.translation", [](Scenario& s) -> double& {
      return s.runner.pose_noise.sigma_translation;
    });
    number(
        "runner.pose_noise.rotation",
        [](Scenario& s) -> double& {
          return s.runner.pose_noise.sigma_rotation;
        },
        kDeg);

    number("estimator.sigma_translation", [](Scenario& s) -> double& {
      return s.runner.estimator.noise.sigma_translation;
    });
    number(
        "estimator.sigma_rotation",
        [](Scenario& s) -> double& {
          return s.runner.estimator.noise.sigma_rotation;
        },
        kDeg);
    number(
        "estimator.prismatic_max_rotation",
        [](Scenario& s) -> double& {
          return s.runner.estimator.thresholds.prismatic_max_rotation;
        },
        kDeg);
    number("estimator.revolute_max_pitch", [](Scenario& s) -> double& {
      return s.runner.estimator.thresholds.revolute_max_pitch;
    });
    number("estimator.initial_damping", [](Scenario& s) -> double& {
      return s.runner.estimator.solver.initial_damping;
    });
    t.push_back({"estimator.max_iterations",
                 [](Scenario& s, const std::string& k, const ScenarioValue& v) {
                   s.runner.estimator.solver.max_iterations =
                       static_cast<int>(asInteger(k, v));
                 },
                 [](const Scenario& s) {
                   return std::to_string(
                       s.runner.estimator.solver.max_iterations);
                 }});

    t.push_back({"replicates",
                 [](Scenario& s, const std::string& k, const ScenarioValue& v) {
                   const auto n = asInteger(k, v);
                   if (n < 1) invalid(k, "must be >= 1");
                   s.replicates = static_cast<int>(n);
                 },
                 [](const Scenario& s) {
                   return std::to_string(s.replicates);
                 }});
    t.push_back({"seed_base",
                 [](Scenario& s, const std::string& k, const ScenarioValue& v) {
                   const auto n = asInteger(k, v);
                   if (n < 0) invalid(k, "must be >= 0");
                   s.seed_base = static_cast<std::uint64_t>(n);
                 },
                 [](const Scenario& s) {
                   return std::to_string(s.seed_base);
                 }});
    return t;
  }();
  return table;
}

// ---------------------------------------------------------------------------
// Validation

void requirePositive(const std::string& key, double v) {
  if (!(v > 0.0)) invalid(key, "must be > 0");
}
void requireNonNegative(const std::string& key, double v) {
  if (!(v >= 0.0)) invalid(key, "must be >= 0");
}
void requirePositive(const std::string& key, const Vector6d& v) {
  for (int i = 0; i < 6; ++i) {
    if (!(v(i) > 0.0) || !std::isfinite(v(i))) invalid(key, "must be > 0");
  }
}
void requireNonZero(const std::string& key, const Vector3d& v) {
  if (!(v.norm() > 0.0)) invalid(key, "must be a nonzero vector");
}

void validate(const Scenario& s) {
  const ObjectSpec& o = s.object;
  requireNonZero("object.joint.axis_direction", o.axis_direction);
  if (o.type == JointType::kHelical && o.pitch == 0.0) {
    invalid("object.joint.pitch", "must be nonzero for a helical joint");
  }
  if (!(o.q_min <= o.q_max)) {
    invalid("object.joint.limits", "min must be <= max");
  }
  if (o.initial_q < o.q_min || o.initial_q > o.q_max) {
    invalid("object.joint.initial_q", "must lie within object.joint.limits");
  }
  requirePositive("object.mechanism.damping", o.mech.damping);
  requireNonNegative("object.mechanism.latch_breakaway",
                     o.mech.latch_breakaway);
  requireNonNegative("object.mechanism.latch_disengage",
                     o.mech.latch_disengage_q);
  requireNonNegative("object.mechanism.closing_spring_k",
                     o.mech.closing_spring_k);
  requireNonNegative("object.mechanism.closing_spring_range",
                     o.mech.closing_spring_range_q);

  requirePositive("grasp.k_couple_trans", s.grasp.k_couple_trans);
  requirePositive("grasp.k_couple_rot", s.grasp.k_couple_rot);
  requireNonNegative("grasp.slip_torque_limit", s.grasp.slip_torque_limit);
  requireNonNegative("grasp.slip_force_limit", s.grasp.slip_force_limit);
  requirePositive("grasp.slip_rot_viscosity", s.grasp.slip_rot_viscosity);
  requirePositive("grasp.slip_trans_viscosity", s.grasp.slip_trans_viscosity);
  requireNonZero("grasp.closing_axis", s.grasp.closing_axis);
  requireNonZero("grasp.handle_axis", s.grasp.handle_axis);
  requirePositive("grasp.handle_half_length", s.grasp.handle_half_length);
  requireNonNegative("world.force_limit", s.force_limit);

  requirePositive("controller.K", s.controller.stiffness);
  requirePositive("controller.M", s.controller.mass);
  requirePositive("controller.B", s.controller.damping);

  const RunnerConfig& r = s.runner;
  requirePositive("runner.step_dq", r.step_dq);
  if (r.poses_per_estimate < 1) {
    invalid("runner.poses_per_estimate", "must be >= 1");
  }
  if (r.target_q < o.q_min || r.target_q > o.q_max) {
    invalid("runner.target_q", "must lie within object.joint.limits");
  }
  if (r.max_steps < 0) invalid("runner.max_steps", "must be >= 0");
  if (!(r.dt > 0.0 && r.dt <= 0.05)) invalid("runner.dt", "must be in (0, 0.05]");
  if (r.substeps_per_motion < 1) {
    invalid("runner.substeps_per_motion", "must be >= 1");
  }
  if (!(r.success_threshold > 0.0 && r.success_threshold <= 1.0)) {
    invalid("runner.success_threshold", "must be in (0, 1]");
  }
  requireNonNegative("runner.pose_noise.translation",
                     r.pose_noise.sigma_translation);
  requireNonNegative("runner.pose_noise.rotation", r.pose_noise.sigma_rotation);
  requirePositive("estimator.sigma_translation",
                  r.estimator.noise.sigma_translation);
  requirePositive("estimator.sigma_rotation", r.estimator.noise.sigma_rotation);
  requireNonNegative("estimator.prismatic_max_rotation",
                     r.estimator.thresholds.prismatic_max_rotation);
  requireNonNegative("estimator.revolute_max_pitch",
                     r.estimator.thresholds.revolute_max_pitch);
  requirePositive("estimator.initial_damping",
                  r.estimator.solver.initial_damping);
  if (r.estimator.solver.max_iterations < 1) {
    invalid("estimator.max_iterations", "must be >= 1");
  }
}

bool near(double a, double b, double tol) {
  if (a == b) return true;  // covers matching infinities
  if (!std::isfinite(a) || !std::isfinite(b)) return false;
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

template <typename Vec>
bool nearVec(const Vec& a, const Vec& b, double tol) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (!near(a(i), b(i), tol)) return false;
  }
  return true;
}

}  // namespace

ScenarioEntries parseScenarioEntries(std::string_view text) {
  ScenarioEntries entries;
  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    LineCursor cur(text.substr(start, end - start), line_no);
    if (!cur.atEnd()) {
      const int key_col = (cur.skipSpace(), cur.column());
      std::string key = cur.key();
      cur.expect('=');
      ScenarioValue value = cur.value();
      if (entries.count(key)) {
        throw ParseError("duplicate key '" + key + "'", line_no, key_col);
      }
      entries.emplace(std::move(key), std::move(value));
    }
    if (end == text.size()) break;
    start = end + 1;
  }
  return entries;
}

ScenarioValue parseScenarioValue(std::string_view text) {
  LineCursor cur(text, 1);
  return cur.value();
}

JointModel Scenario::joint() const {
  const Pose zero(rotationFromRpy(object.zero_rpy), object.zero_position);
  switch (object.type) {
    case JointType::kPrismatic:
      return JointModel::Prismatic(object.axis_direction, zero, object.q_min,
                                   object.q_max);
    case JointType::kRevolute:
      return JointModel::Revolute(object.axis_direction, object.axis_origin,
                                  zero, object.q_min, object.q_max);
    case JointType::kHelical:
      return JointModel::Helical(object.axis_direction, object.axis_origin,
                                 object.pitch, zero, object.q_min,
                                 object.q_max);
  }
  return {};
}

World Scenario::makeWorld() const {
  GraspCoupling g = grasp;
  g.grasp_transform = Pose::Identity();
  g.accumulated_slip_angle = 0.0;
  g.accumulated_slip_dist = 0.0;
  return World::Grasped(
      joint(), object.initial_q,
      Pose(rotationFromRpy(object.handle_rpy), object.handle_position), g,
      object.mech, force_limit);
}

RunnerConfig Scenario::runnerFor(int index) const {
  RunnerConfig cfg = runner;
  cfg.seed = seed_base + static_cast<std::uint64_t>(index);
  return cfg;
}

Scenario scenarioFromEntries(const ScenarioEntries& entries,
                             const ScenarioEntries& overrides) {
  ScenarioEntries merged = entries;
  for (const auto& [k, v] : overrides) merged[k] = v;

  std::set<std::string> known;
  for (const KeySpec& spec : keyTable()) known.insert(spec.name);
  for (const auto& [k, v] : merged) {
    if (!known.count(k)) invalid(k, "unknown key");
  }

  Scenario s;
  for (const KeySpec& spec : keyTable()) {
    auto it = merged.find(spec.name);
    if (it != merged.end()) spec.read(s, spec.name, it->second);
  }
  if (!merged.count("runner.target_q")) s.runner.target_q = s.object.q_max;
  if (!merged.count("controller.B")) {
    requirePositive("controller.K", s.controller.stiffness);
    requirePositive("controller.M", s.controller.mass);
    s.controller.damping = AdmittanceParams::criticalDamping(
        s.controller.stiffness, s.controller.mass);
  }
  validate(s);
  return s;
}

Scenario parseScenario(std::string_view text,
                       const ScenarioEntries& overrides) {
  return scenarioFromEntries(parseScenarioEntries(text), overrides);
}

Scenario loadScenario(const std::filesystem::path& path,
                      const ScenarioEntries& overrides) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read scenario file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parseScenario(buf.str(), overrides);
}

std::string serializeScenario(const Scenario& scenario) {
  std::string out;
  std::string section;
  for (const KeySpec& spec : keyTable()) {
    const std::string head = spec.name.substr(0, spec.name.find('.'));
    if (head != section && !out.empty()) out += "\n";
    section = head;
    out += spec.name + " = " + spec.write(scenario) + "\n";
  }
  return out;
}

bool equivalent(const Scenario& a, const Scenario& b, double tol) {
  const ObjectSpec& oa = a.object;
  const ObjectSpec& ob = b.object;
  const MechanismForces& ma = oa.mech;
  const MechanismForces& mb = ob.mech;
  const GraspCoupling& ga = a.grasp;
  const GraspCoupling& gb = b.grasp;
  const RunnerConfig& ra = a.runner;
  const RunnerConfig& rb = b.runner;
  return a.name == b.name && oa.type == ob.type &&
         nearVec(oa.axis_direction, ob.axis_direction, tol) &&
         nearVec(oa.axis_origin, ob.axis_origin, tol) &&
         near(oa.pitch, ob.pitch, tol) && near(oa.q_min, ob.q_min, tol) &&
         near(oa.q_max, ob.q_max, tol) &&
         near(oa.initial_q, ob.initial_q, tol) &&
         nearVec(oa.zero_position, ob.zero_position, tol) &&
         nearVec(oa.zero_rpy, ob.zero_rpy, tol) &&
         nearVec(oa.handle_position, ob.handle_position, tol) &&
         nearVec(oa.handle_rpy, ob.handle_rpy, tol) &&
         near(ma.damping, mb.damping, tol) &&
         near(ma.latch_breakaway, mb.latch_breakaway, tol) &&
         near(ma.latch_disengage_q, mb.latch_disengage_q, tol) &&
         near(ma.closing_spring_k, mb.closing_spring_k, tol) &&
         near(ma.closing_spring_range_q, mb.closing_spring_range_q, tol) &&
         near(ga.k_couple_trans, gb.k_couple_trans, tol) &&
         near(ga.k_couple_rot, gb.k_couple_rot, tol) &&
         near(ga.slip_torque_limit, gb.slip_torque_limit, tol) &&
         near(ga.slip_force_limit, gb.slip_force_limit, tol) &&
         near(ga.slip_rot_viscosity, gb.slip_rot_viscosity, tol) &&
         near(ga.slip_trans_viscosity, gb.slip_trans_viscosity, tol) &&
         nearVec(ga.closing_axis, gb.closing_axis, tol) &&
         nearVec(ga.handle_axis, gb.handle_axis, tol) &&
         near(ga.handle_half_length, gb.handle_half_length, tol) &&
         near(a.force_limit, b.force_limit, tol) &&
         nearVec(a.controller.stiffness, b.controller.stiffness, tol) &&
         nearVec(a.controller.damping, b.controller.damping, tol) &&
         nearVec(a.controller.mass, b.controller.mass, tol) &&
         a.controller.frame == b.controller.frame &&
         near(ra.step_dq, rb.step_dq, tol) &&
         ra.poses_per_estimate == rb.poses_per_estimate &&
         near(ra.target_q, rb.target_q, tol) && ra.max_steps == rb.max_steps &&
         near(ra.dt, rb.dt, tol) &&
         ra.substeps_per_motion == rb.substeps_per_motion &&
         near(ra.success_threshold, rb.success_threshold, tol) &&
         near(ra.pose_noise.sigma_translation, rb.pose_noise.sigma_translation,
              tol) &&
         near(ra.pose_noise.sigma_rotation, rb.pose_noise.sigma_rotation,
              tol) &&
         near(ra.estimator.noise.sigma_translation,
              rb.estimator.noise.sigma_translation, tol) &&
         near(ra.estimator.noise.sigma_rotation,
              rb.estimator.noise.sigma_rotation, tol) &&
         near(ra.estimator.thresholds.prismatic_max_rotation,
              rb.estimator.thresholds.prismatic_max_rotation, tol) &&
         near(ra.estimator.thresholds.revolute_max_pitch,
              rb.estimator.thresholds.revolute_max_pitch, tol) &&
         near(ra.estimator.solver.initial_damping,
              rb.estimator.solver.initial_damping, tol) &&
         ra.estimator.solver.max_iterations ==
             rb.estimator.solver.max_iterations &&
         a.replicates == b.replicates && a.seed_base == b.seed_base;
}

}  // namespace artiprop
