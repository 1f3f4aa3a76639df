#include "obsdev/json_io.hpp"

#include <fstream>
#include <sstream>

namespace obsdev {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::InputError, what); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object()) bad("expected a JSON object");
  const auto it = j.find(key);
  if (it == j.end()) bad(std::string("missing field \"") + key + "\"");
  return *it;
}

double number(const Json& j, const char* what) {
  if (!j.is_number()) bad(std::string(what) + " must be numeric");
  return j.get<double>();
}

int dimension(const Json& j) {
  const Json& d = field(j, "dim");
  if (!d.is_number_integer()) bad("\"dim\" must be an integer");
  const long long n = d.get<long long>();
  if (n < 1 || n > kMaxDim) bad("\"dim\" must lie in [1, " + std::to_string(kMaxDim) + "]");
  return static_cast<int>(n);
}

RMatrix real_grid(const Json& j, Eigen::Index rows, Eigen::Index cols, const char* what) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != rows) {
    bad(std::string(what) + " must have " + std::to_string(rows) + " rows");
  }
  RMatrix out(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      bad(std::string(what) + " row " + std::to_string(r) + " must have " +
          std::to_string(cols) + " entries");
    }
    for (Eigen::Index c = 0; c < cols; ++c) out(r, c) = number(row[static_cast<std::size_t>(c)], what);
  }
  return out;
}

RVector real_list(const Json& j, Eigen::Index size, const char* what) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != size) {
    bad(std::string(what) + " must have " + std::to_string(size) + " entries");
  }
  RVector out(size);
  for (Eigen::Index k = 0; k < size; ++k) out(k) = number(j[static_cast<std::size_t>(k)], what);
  return out;
}

Json grid(const RMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

Json matrix_to_json(const CMatrix& m) {
  return Json{{"dim", m.rows()}, {"re", grid(m.real())}, {"im", grid(m.imag())}};
}

Json to_json(const HermitianMatrix& a) { return matrix_to_json(a.matrix()); }

Json to_json(const StateVector& phi) {
  Json re = Json::array();
  Json im = Json::array();
  for (int i = 0; i < phi.dim(); ++i) {
    re.push_back(phi[i].real());
    im.push_back(phi[i].imag());
  }
  return Json{{"dim", phi.dim()}, {"re", re}, {"im", im}};
}

Json to_json(const PreserverForm& form) {
  return Json{{"dim", form.dim},
              {"sign", form.sign},
              {"antiunitary", form.antiunitary},
              {"U", matrix_to_json(form.u)},
              {"F", to_json(form.f)},
              {"X", to_json(form.x)}};
}

Json to_json(const LinearMapOnHermitians& map) {
  return Json{{"dim", map.dim}, {"basis", "gell-mann"}, {"matrix", grid(map.matrix)}};
}

Json to_json(const DeviationReport& report) {
  Json j{{"value", report.value}, {"route", std::string(to_string(report.route))}};
  if (report.witness) j["witness"] = to_json(*report.witness);
  if (report.minimizer_lambda) j["minimizer_lambda"] = *report.minimizer_lambda;
  if (report.gap_to_spectral) j["gap_to_spectral"] = *report.gap_to_spectral;
  return j;
}

Json to_json(const CheckReport& report) {
  return Json{{"property", std::string(to_string(report.property))},
              {"samples", report.samples},
              {"max_defect", report.max_defect},
              {"tolerance", report.tolerance},
              {"verdict", report.verdict}};
}

Json to_json(const DistinguishingWitness& witness) {
  return Json{{"R", to_json(witness.r)},
              {"under", witness.under_p ? "P" : "Q"},
              {"deviation_p_plus_r", witness.deviation_p},
              {"deviation_q_plus_r", witness.deviation_q}};
}

CMatrix matrix_from_json(const Json& j) {
  const int n = dimension(j);
  const RMatrix re = real_grid(field(j, "re"), n, n, "\"re\"");
  const RMatrix im = real_grid(field(j, "im"), n, n, "\"im\"");
  CMatrix m(n, n);
  m.real() = re;
  m.imag() = im;
  return m;
}

HermitianMatrix hermitian_from_json(const Json& j, double tol) {
  return HermitianMatrix::validate(matrix_from_json(j), tol);
}

StateVector state_from_json(const Json& j, double tol) {
  const int n = dimension(j);
  const RVector re = real_list(field(j, "re"), n, "\"re\"");
  const RVector im = real_list(field(j, "im"), n, "\"im\"");
  CVector v(n);
  v.real() = re;
  v.imag() = im;
  return StateVector::make(v, tol);
}

PreserverForm form_from_json(const Json& j) {
  PreserverForm form;
  form.dim = dimension(j);
  const Json& sign = field(j, "sign");
  if (!sign.is_number_integer() || (sign.get<int>() != 1 && sign.get<int>() != -1)) {
    bad("\"sign\" must be 1 or -1");
  }
  form.sign = sign.get<int>();
  const Json& anti = field(j, "antiunitary");
  if (!anti.is_boolean()) bad("\"antiunitary\" must be a boolean");
  form.antiunitary = anti.get<bool>();
  form.u = matrix_from_json(field(j, "U"));
  form.f = hermitian_from_json(field(j, "F"));
  form.x = hermitian_from_json(field(j, "X"));
  if (form.u.rows() != form.dim || form.f.dim() != form.dim || form.x.dim() != form.dim) {
    bad("form components disagree with \"dim\"");
  }
  if (max_abs_diff(form.u.adjoint() * form.u, CMatrix::Identity(form.dim, form.dim)) > 1e-10) {
    bad("\"U\" is not unitary within 1e-10");
  }
  return form;
}

LinearMapOnHermitians map_from_json(const Json& j) {
  LinearMapOnHermitians map;
  map.dim = dimension(j);
  const auto basis = j.find("basis");
  if (basis != j.end() && (!basis->is_string() || basis->get<std::string>() != "gell-mann")) {
    bad("only the \"gell-mann\" basis is supported");
  }
  const Eigen::Index m = static_cast<Eigen::Index>(map.dim) * map.dim;
  map.matrix = real_grid(field(j, "matrix"), m, m, "\"matrix\"");
  return map;
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return Json::parse(buffer.str());
  } catch (const Json::parse_error& e) {
    bad(path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path);
  if (!out) bad("cannot write " + path.string());
  out << j.dump(2) << '\n';
  if (!out) bad("write failed for " + path.string());
}

}  // namespace obsdev
