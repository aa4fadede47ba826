#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <random>

#include "streamcode/channel.hpp"
#include "streamcode/decoder.hpp"
#include "streamcode/io.hpp"
#include "streamcode/streaming.hpp"
#include "streamcode/verify.hpp"

namespace py = pybind11;
using namespace streamcode;

namespace {

// Symbols cross the boundary as (a, b) meaning a + b*w.
using Sym = std::pair<uint32_t, uint32_t>;

Sym to_py(ExtElem x) { return {x.a, x.b}; }

ExtElem from_py(const QuadExtField& f, Sym s) {
  if (s.first >= f.p() || s.second >= f.p()) {
    throw py::value_error("coefficient out of range for p=" + std::to_string(f.p()));
  }
  return ExtElem{s.first, s.second};
}

std::vector<ExtElem> from_py(const QuadExtField& f, const std::vector<Sym>& v) {
  std::vector<ExtElem> out;
  out.reserve(v.size());
  for (const auto& s : v) {
    out.push_back(from_py(f, s));
  }
  return out;
}

std::vector<std::vector<Sym>> matrix_to_py(const FieldMatrix& m) {
  std::vector<std::vector<Sym>> out(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      out[i].push_back(to_py(m(i, j)));
    }
  }
  return out;
}

py::dict params_dict(const CodeParams& p) {
  py::dict d;
  d["T"] = p.T;
  d["B"] = p.B;
  d["N"] = p.N;
  d["W"] = p.W;
  d["k"] = p.k;
  d["n"] = p.n;
  d["p"] = p.p;
  d["rate"] = to_string(rate(p));
  d["capacity"] = to_string(capacity(p));
  return d;
}

py::object json_to_py(const nlohmann::json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

struct Code {
  std::shared_ptr<const CodeTables> t;

  Code(int T, int B, int N, std::optional<int> W)
      : t(std::make_shared<const CodeTables>(build_code(derive_params(T, B, N, W)))) {}

  std::vector<Sym> encode(const std::vector<Sym>& msg) const {
    std::vector<Sym> out;
    for (ExtElem x : encode_block(*t, from_py(t->field, msg))) {
      out.push_back(to_py(x));
    }
    return out;
  }

  py::object decode(const std::vector<std::optional<Sym>>& received) const {
    ReceivedBlock rx;
    for (const auto& s : received) {
      rx.symbols.push_back(s ? std::optional<ExtElem>(from_py(t->field, *s)) : std::nullopt);
    }
    return json_to_py(report_to_json(decode_block(*t, rx)));
  }

  std::vector<std::vector<Sym>> matrix(const std::string& name) const {
    const std::map<std::string, const FieldMatrix*> tables = {
        {"Gpp", &t->Gpp}, {"M", &t->M}, {"Minv", &t->Minv}, {"Gp", &t->Gp},
        {"G", &t->G},     {"Gtilde", &t->Gtilde}, {"H", &t->H}};
    const auto it = tables.find(name);
    if (it == tables.end()) {
      throw py::key_error(name);
    }
    return matrix_to_py(*it->second);
  }
};

struct PyEncoder {
  Code code;
  StreamEncoder enc;
  explicit PyEncoder(const Code& c) : code(c), enc(c.t) {}

  std::vector<Sym> step(const std::vector<Sym>& msg) {
    const Packet pk = enc.encode_step(enc.clock(), from_py(code.t->field, msg));
    std::vector<Sym> out;
    for (ExtElem x : *pk.payload) {
      out.push_back(to_py(x));
    }
    return out;
  }
};

struct PyDecoder {
  Code code;
  StreamDecoder dec;
  explicit PyDecoder(const Code& c) : code(c), dec(c.t) {}

  // Returns (seq, symbols-or-None, delay) for each message released at this clock.
  std::vector<py::tuple> step(const std::optional<std::vector<Sym>>& payload) {
    Packet pk{dec.clock(), std::nullopt};
    if (payload) {
      pk.payload = from_py(code.t->field, *payload);
    }
    std::vector<py::tuple> out;
    for (const auto& m : dec.decode_step(pk)) {
      std::vector<std::optional<Sym>> syms;
      for (const auto& s : m.symbols) {
        syms.push_back(s ? std::optional<Sym>(to_py(*s)) : std::nullopt);
      }
      out.push_back(py::make_tuple(m.seq, syms, m.delay));
    }
    return out;
  }
};

py::dict simulate(int T, int B, int N, std::optional<int> W, std::size_t length, uint64_t seed, double loss_rate,
                  double loss_mix) {
  const CodeParams p = derive_params(T, B, N, W);
  auto t = std::make_shared<const CodeTables>(build_code(p));
  const auto loss = sample_sequence({p.W, p.B, p.N}, length + static_cast<std::size_t>(T), seed, {loss_rate, loss_mix});
  std::mt19937_64 rng(seed);
  StreamEncoder enc(t);
  StreamDecoder dec(t);
  std::vector<std::vector<ExtElem>> sent;
  uint64_t missed = 0, wrong = 0, erased = 0;
  int max_delay = 0;
  for (std::size_t i = 0; i < loss.size(); ++i) {
    std::vector<ExtElem> m(static_cast<std::size_t>(p.k));
    for (auto& s : m) {
      s = t->field.from_index(rng() % t->field.order());
    }
    sent.push_back(m);
    Packet pk = enc.encode_step(i, m);
    if (loss[i]) {
      pk.payload.reset();
      ++erased;
    }
    for (const auto& d : dec.decode_step(pk)) {
      if (!d.complete()) {
        ++missed;
        continue;
      }
      max_delay = std::max(max_delay, d.delay);
      for (std::size_t r = 0; r < d.symbols.size(); ++r) {
        if (!(*d.symbols[r] == sent[d.seq][r])) {
          ++wrong;
          break;
        }
      }
    }
  }
  py::dict out;
  out["steps"] = loss.size();
  out["erased_packets"] = erased;
  out["missed_deadlines"] = missed;
  out["wrong_messages"] = wrong;
  out["max_delay"] = max_delay;
  out["oracle_fallbacks"] = dec.stats().oracle_fallbacks;
  return out;
}

py::dict verify(int T, int B, int N, bool recovery) {
  const CodeTables t = build_code(derive_params(T, B, N));
  py::list reports;
  bool pass = true;
  for (const auto& part : {check_B1(t), check_R1(t), check_B2(t), check_R2(t), check_code_properties(t)}) {
    for (const auto& r : part) {
      py::dict d;
      d["id"] = r.id;
      d["param"] = r.param;
      d["pass"] = r.pass;
      d["informational"] = r.informational;
      d["note"] = r.note;
      reports.append(d);
      pass = pass && (r.pass || r.informational);
    }
  }
  py::dict out;
  out["conditions"] = reports;
  if (recovery) {
    const RecoveryReport r = check_recovery_exhaustive(t);
    out["patterns"] = r.patterns;
    out["recovery_pass"] = r.pass();
    pass = pass && r.pass();
  }
  out["pass"] = pass;
  return out;
}

} // namespace

PYBIND11_MODULE(streamcode, m) {
  m.doc() = "Rate-optimal streaming erasure code over GF(p^2)";

  py::register_exception<ParamError>(m, "ParamError", PyExc_ValueError);
  py::register_exception<GuardExceeded>(m, "GuardExceeded", PyExc_RuntimeError);
  py::register_exception<StreamOrderError>(m, "StreamOrderError", PyExc_RuntimeError);

  m.def("params", [](int T, int B, int N, std::optional<int> W) { return params_dict(derive_params(T, B, N, W)); },
        py::arg("T"), py::arg("B"), py::arg("N"), py::arg("W") = py::none());

  py::class_<Code>(m, "Code")
      .def(py::init<int, int, int, std::optional<int>>(), py::arg("T"), py::arg("B"), py::arg("N"),
           py::arg("W") = py::none())
      .def_property_readonly("params", [](const Code& c) { return params_dict(c.t->params); })
      .def_property_readonly("p", [](const Code& c) { return c.t->field.p(); })
      .def_property_readonly("alpha", [](const Code& c) { return to_py(c.t->alpha); })
      .def("matrix", &Code::matrix, py::arg("name"))
      .def("to_json", [](const Code& c) { return code_dump(*c.t).dump(); })
      .def("encode", &Code::encode, py::arg("message"))
      .def("decode", &Code::decode, py::arg("received"));

  py::class_<PyEncoder>(m, "StreamEncoder").def(py::init<const Code&>()).def("step", &PyEncoder::step);
  py::class_<PyDecoder>(m, "StreamDecoder")
      .def(py::init<const Code&>())
      .def("step", &PyDecoder::step, py::arg("payload"));

  m.def("sample_losses", [](int W, int B, int N, std::size_t length, uint64_t seed) {
    return sample_sequence({W, B, N}, length, seed);
  }, py::arg("W"), py::arg("B"), py::arg("N"), py::arg("length"), py::arg("seed"));
  m.def("is_admissible", [](const std::vector<uint8_t>& e, int W, int B, int N) {
    return is_admissible(e, {W, B, N}).admissible;
  }, py::arg("erasures"), py::arg("W"), py::arg("B"), py::arg("N"));

  m.def("simulate", &simulate, py::arg("T"), py::arg("B"), py::arg("N"), py::arg("W") = py::none(),
        py::arg("length") = 10000, py::arg("seed") = 1, py::arg("loss_rate") = 0.05, py::arg("loss_mix") = 0.5);
  m.def("verify", &verify, py::arg("T"), py::arg("B"), py::arg("N"), py::arg("recovery") = true);

  m.def("pack", [](const Code& c, const py::bytes& data) {
    const std::string s = data;
    std::vector<std::vector<Sym>> out;
    for (const auto& msg : pack_bytes(std::vector<uint8_t>(s.begin(), s.end()), c.t->field, c.t->params.k)) {
      std::vector<Sym> row;
      for (ExtElem x : msg) {
        row.push_back(to_py(x));
      }
      out.push_back(row);
    }
    return out;
  });
  m.def("unpack", [](const Code& c, const std::vector<std::vector<Sym>>& msgs) {
    std::vector<std::vector<ExtElem>> in;
    for (const auto& row : msgs) {
      in.push_back(from_py(c.t->field, row));
    }
    const auto bytes = unpack_bytes(in, c.t->field);
    return py::bytes(reinterpret_cast<const char*>(bytes.data()), bytes.size());
  });
}
