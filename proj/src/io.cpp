#include "jorbit/io.hpp"

#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "jorbit/errors.hpp"

namespace jorbit {

using ojson = nlohmann::ordered_json;

CMatrix parse_matrix_literal(std::string_view text) {
  ojson doc;
  try {
    doc = ojson::parse(text);
  } catch (const std::exception& e) {
    throw Error(ErrorKind::parse, std::string("matrix literal is not valid json: ") + e.what());
  }
  try {
    const std::string field = doc.value("field", std::string("real"));
    if (field != "real" && field != "complex") throw Error(ErrorKind::parse, "matrix field must be real or complex");
    const auto& rows = doc.at("rows");
    if (!rows.is_array() || rows.empty()) throw Error(ErrorKind::parse, "matrix rows must be a non-empty array");
    const auto nrows = static_cast<Eigen::Index>(rows.size());
    const auto ncols = static_cast<Eigen::Index>(rows[0].size());
    CMatrix m(nrows, ncols);
    for (Eigen::Index i = 0; i < nrows; ++i) {
      const auto& row = rows[static_cast<std::size_t>(i)];
      if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != ncols) {
        throw Error(ErrorKind::parse, "matrix rows must all have the same length");
      }
      for (Eigen::Index j = 0; j < ncols; ++j) {
        const auto& v = row[static_cast<std::size_t>(j)];
        if (v.is_number()) {
          m(i, j) = v.get<double>();
        } else if (field == "complex" && v.is_array() && v.size() == 2) {
          m(i, j) = std::complex<double>(v[0].get<double>(), v[1].get<double>());
        } else {
          throw Error(ErrorKind::parse, "bad matrix entry " + v.dump());
        }
      }
    }
    return m;
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw Error(ErrorKind::parse, std::string("malformed matrix literal: ") + e.what());
  }
}

std::string format_matrix_literal(const CMatrix& m, BaseField field) {
  ojson doc;
  doc["field"] = field == BaseField::complex ? "complex" : "real";
  ojson rows = ojson::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    ojson row = ojson::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (field == BaseField::complex) {
        row.push_back(ojson::array({m(i, j).real(), m(i, j).imag()}));
      } else {
        row.push_back(m(i, j).real());
      }
    }
    rows.push_back(std::move(row));
  }
  doc["rows"] = std::move(rows);
  return doc.dump();
}

AlgebraElement parse_element_literal(const CaseDescriptor& c, std::string_view text) {
  require_backend(c);
  const CMatrix m = parse_matrix_literal(text);
  const int s = c.matrix_size();
  if (m.rows() != s || m.cols() != s) {
    throw Error(ErrorKind::shape_mismatch, "case " + c.case_id + " needs a " + std::to_string(s) + "x" +
                                               std::to_string(s) + " matrix");
  }
  const AlgebraElement x = make_element(c, m);
  const double dev = (x.entries - m).cwiseAbs().maxCoeff();
  if (dev > 1e-12) {
    throw Error(ErrorKind::shape_mismatch,
                "literal does not satisfy the " + std::string(to_string(c.model_kind)) + " constraint of " + c.case_id);
  }
  return x;
}

std::string emit_cases(const std::vector<CaseDescriptor>& cases, ReportFormat format) {
  auto opt_text = [](const std::optional<int>& v) { return v ? std::to_string(*v) : std::string(); };
  if (format == ReportFormat::json) {
    ojson doc;
    doc["schema"] = "jorbit.cases/1";
    ojson arr = ojson::array();
    for (const auto& c : cases) {
      ojson j;
      j["case_id"] = c.case_id;
      j["group"] = c.group_name;
      j["field"] = std::string(to_string(c.base_field));
      j["model"] = std::string(to_string(c.model_kind));
      j["n"] = c.n;
      j["d"] = c.d;
      j["e"] = c.e;
      j["r"] = c.r();
      j["ambient_dim"] = c.ambient_dim;
      j["tau"] = bessel_parameter(c);
      j["l2_threshold"] = l2_threshold(c);
      j["backend"] = c.backend_available;
      j["family_parameter"] = c.family_parameter ? ojson(*c.family_parameter) : ojson(nullptr);
      j["fixed_rank"] = c.fixed_rank ? ojson(*c.fixed_rank) : ojson(nullptr);
      arr.push_back(std::move(j));
    }
    doc["cases"] = std::move(arr);
    return doc.dump(2) + "\n";
  }
  std::ostringstream os;
  if (format == ReportFormat::csv) {
    os << "case_id,group,field,model,n,d,e,r,ambient_dim,tau,l2_threshold,backend,family_parameter,fixed_rank\n";
    for (const auto& c : cases) {
      os << c.case_id << ',' << c.group_name << ',' << to_string(c.base_field) << ',' << to_string(c.model_kind) << ','
         << c.n << ',' << c.d << ',' << c.e << ',' << c.r() << ',' << c.ambient_dim << ',' << bessel_parameter(c)
         << ',' << l2_threshold(c) << ',' << (c.backend_available ? "true" : "false") << ','
         << opt_text(c.family_parameter) << ',' << opt_text(c.fixed_rank) << '\n';
    }
    return os.str();
  }
  os << std::left << std::setw(14) << "case" << std::setw(14) << "group" << std::setw(12) << "field" << std::setw(18)
     << "model" << std::setw(4) << "n" << std::setw(4) << "d" << std::setw(4) << "e" << std::setw(5) << "r"
     << std::setw(6) << "dim" << std::setw(7) << "tau" << std::setw(10) << "backend" << '\n';
  for (const auto& c : cases) {
    os << std::left << std::setw(14) << c.case_id << std::setw(14) << c.group_name << std::setw(12)
       << to_string(c.base_field) << std::setw(18) << to_string(c.model_kind) << std::setw(4) << c.n << std::setw(4)
       << c.d << std::setw(4) << c.e << std::setw(5) << c.r() << std::setw(6) << c.ambient_dim << std::setw(7)
       << bessel_parameter(c) << std::setw(10) << (c.backend_available ? "yes" : "metadata") << '\n';
  }
  return os.str();
}

}  // namespace jorbit
