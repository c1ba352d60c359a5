#include "lzeta/report.hpp"

#include <cstdio>

namespace lzeta {

std::string format_number(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.15e", v);
  return buf;
}

void write_catalog(std::ostream& out, const PoleCatalog& catalog, const std::vector<ScannedPole>* scan) {
  out << "location_num,location_den,order_bound,status,residue_re,residue_im,residue_err\n";
  if (catalog.entries.empty()) {
    out << "# ENTIRE\n";
    return;
  }
  for (size_t i = 0; i < catalog.entries.size(); ++i) {
    const PoleEntry& e = catalog.entries[i];
    out << e.location.num().get_str() << "," << e.location.den().get_str() << "," << e.order_bound << ",";
    if (!scan) {
      out << "CANDIDATE,,,\n";
      continue;
    }
    const ScannedPole& s = (*scan)[i];
    out << (s.status == PoleStatus::Confirmed ? "CONFIRMED" : "UNDETECTED") << ",";
    Complex r = s.laurent.coeffs.empty() ? Complex(0.0) : s.laurent.coeffs[0];
    out << format_number(r.real()) << "," << format_number(r.imag()) << "," << format_number(s.laurent.error) << "\n";
  }
}

void write_residues(std::ostream& out, const std::vector<ScannedPole>& scan) {
  out << "location_num,location_den,j,status,coeff_re,coeff_im,radius,nodes,err\n";
  for (const auto& s : scan) {
    const auto& l = s.laurent;
    for (size_t j = 0; j < l.coeffs.size(); ++j) {
      bool kept = static_cast<int>(j) < s.detected_order;
      out << s.entry.location.num().get_str() << "," << s.entry.location.den().get_str() << "," << j + 1 << ","
          << (kept ? "NONZERO" : "BELOW_FLOOR") << "," << format_number(l.coeffs[j].real()) << ","
          << format_number(l.coeffs[j].imag()) << "," << format_number(l.radius) << "," << l.nodes << ","
          << format_number(l.error) << "\n";
    }
  }
}

void write_values(std::ostream& out, const std::vector<FValue>& values) {
  out << "z_re,z_im,F_re,F_im,err_est\n";
  for (const auto& v : values)
    out << format_number(v.z.real()) << "," << format_number(v.z.imag()) << "," << format_number(v.value.real())
        << "," << format_number(v.value.imag()) << "," << format_number(v.error) << "\n";
}

void write_plot(std::ostream& out, const std::vector<FValue>& values) {
  out << "z_re,|F|\n";
  for (const auto& v : values) out << format_number(v.z.real()) << "," << format_number(std::abs(v.value)) << "\n";
}

void write_verify(std::ostream& out, const VerifyReport& report) {
  out << "z_re,z_im,F_re,F_im,oracle_re,oracle_im,deviation,status\n";
  for (const auto& p : report.points) {
    out << format_number(p.z.real()) << "," << format_number(p.z.imag()) << ",";
    if (!p.failure.empty()) {
      out << ",,,,,FAILED\n";
      continue;
    }
    out << format_number(p.continued.real()) << "," << format_number(p.continued.imag()) << ","
        << format_number(p.direct.real()) << "," << format_number(p.direct.imag()) << ","
        << format_number(p.deviation) << ",OK\n";
  }
  out << "# max_deviation=" << format_number(report.max_deviation)
      << " tolerance=" << format_number(report.tolerance) << " " << (report.pass ? "PASS" : "FAIL") << "\n";
}

}  // namespace lzeta
