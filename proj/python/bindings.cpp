#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "json.hpp"
#include "munormal/blocks.hpp"
#include "munormal/counting.hpp"
#include "munormal/numerals.hpp"
#include "munormal/presets.hpp"
#include "munormal/schedule.hpp"
#include "munormal/stream.hpp"

namespace py = pybind11;
using namespace munormal;

namespace {

using MeasureHandle = std::shared_ptr<CylinderMeasure>;
using LanguageHandle = std::shared_ptr<ShiftLanguage>;

MeasureHandle handle(const MeasurePtr& p) { return std::const_pointer_cast<CylinderMeasure>(p); }
LanguageHandle handle(const LanguagePtr& p) { return std::const_pointer_cast<ShiftLanguage>(p); }

py::object from_json_text(const std::string& text) { return py::module_::import("json").attr("loads")(text); }

py::dict value_dict(const RealValue& v) {
    py::dict d;
    d["value"] = v.value.to_string();
    d["lo"] = v.lo.to_string();
    d["hi"] = v.hi.to_string();
    d["tail"] = v.tail.to_string(6);
    d["precision"] = v.precision;
    d["digits_used"] = v.digits_used;
    return d;
}

RunConfig config_from(const std::string& preset_or_json) {
    if (has_preset(preset_or_json)) return preset(preset_or_json);
    return parse_config(preset_or_json);
}

}  // namespace

PYBIND11_MODULE(_munormal, m) {
    m.doc() = "Digit streams normal for a target shift-invariant measure";
#ifdef VERSION_INFO
#define MUNORMAL_STR2(x) #x
#define MUNORMAL_STR(x) MUNORMAL_STR2(x)
    m.attr("__version__") = MUNORMAL_STR(VERSION_INFO);
#endif

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    py::class_<CylinderMeasure, MeasureHandle>(m, "Measure")
        .def("__call__", [](const CylinderMeasure& mu, const Word& b) { return mu(b); })
        .def("precise", [](const CylinderMeasure& mu, const Word& b, unsigned bits) {
            return mu.precise(b, bits).to_string();
        }, py::arg("b"), py::arg("bits") = 128)
        .def("exact", [](const CylinderMeasure& mu, const Word& b) -> std::optional<std::string> {
            auto q = mu.exact(b);
            if (!q) return std::nullopt;
            return q->get_str();
        })
        .def_property_readonly("id", &CylinderMeasure::id);
    m.def("measure", [](const std::string& spec) { return handle(parse_measure(spec)); }, py::arg("spec"),
          "Measure from 'qary:Q', 'lueroth[:C]', 'gauss[:C]' or 'beta:EXPANSION'.");

    py::class_<ParryData>(m, "ParryData")
        .def_static("parse", &ParryData::parse)
        .def_property_readonly("beta", [](const ParryData& d) { return d.beta(); })
        .def_property_readonly("alphabet_size", &ParryData::alphabet_size)
        .def_property_readonly("id", &ParryData::id);

    py::class_<ShiftLanguage, LanguageHandle>(m, "Language")
        .def("admissible", [](const ShiftLanguage& l, const Word& w) { return l.admissible(w); })
        .def("padding", [](const ShiftLanguage& l, const Word& a, const Word& b) { return l.padding(a, b); })
        .def_property_readonly("spec_constant", &ShiftLanguage::spec_constant)
        .def_property_readonly("id", &ShiftLanguage::id);
    m.def("full_shift", [](Digit first, Digit last) { return handle(full_shift(Alphabet::range(first, last))); });
    m.def("beta_shift", [](const std::string& expansion) { return handle(beta_shift(ParryData::parse(expansion))); });
    m.def("count_admissible", &count_admissible);

    m.def("epsilon_bound", &epsilon_bound, py::arg("base"), py::arg("window"), py::arg("M"), py::arg("j"),
          py::arg("k"), py::arg("m_k"));
    m.def("build_block", [](const LanguageHandle& l, const MeasureHandle& nu, Digit base, std::size_t window, double M,
                            Digit first_digit, std::size_t k) {
        BlockOptions o;
        o.first_digit = first_digit;
        o.certificate_k = k;
        WeightedBlock b = build_block(*l, *nu, base, window, M, o);
        py::dict d;
        d["word"] = b.word;
        d["copies"] = b.copies;
        d["epsilon"] = b.certificate.epsilon;
        d["m_k"] = b.certificate.m_k;
        d["j"] = b.j;
        return d;
    }, py::arg("language"), py::arg("measure"), py::arg("base"), py::arg("window"), py::arg("M"),
       py::arg("first_digit") = 0, py::arg("k") = 1);
    m.def("check_normal", [](const Word& w, double eps, std::size_t k, const MeasureHandle& nu,
                             const LanguageHandle& language) {
        auto r = check_normal(w, eps, k, *nu, language.get());
        py::dict d;
        d["pass"] = r.pass;
        d["checked"] = r.checked;
        d["max_rel_dev"] = r.max_rel_dev;
        d["violations"] = r.violations.size();
        return d;
    }, py::arg("word"), py::arg("epsilon"), py::arg("k"), py::arg("measure"), py::arg("language") = nullptr);

    m.def("count_blocks", [](const Word& source, const std::vector<Word>& targets, std::uint64_t n, unsigned chunks) {
        CountOptions o;
        o.chunks = chunks;
        std::vector<std::uint64_t> out;
        for (const auto& r : count_blocks(source, targets, n, o).blocks) out.push_back(r.count);
        return out;
    }, py::arg("source"), py::arg("targets"), py::arg("n"), py::arg("chunks") = 1);
    m.def("census", [](const Word& source, std::size_t k, std::uint64_t n, unsigned chunks) {
        return census(source, k, n, chunks);
    }, py::arg("source"), py::arg("k"), py::arg("n"), py::arg("chunks") = 1);

    py::class_<Schedule, std::shared_ptr<Schedule>>(m, "Schedule")
        .def_static("load", [](const std::string& preset_or_json) {
            return std::const_pointer_cast<Schedule>(materialize(config_from(preset_or_json)));
        }, py::arg("preset_or_json"))
        .def_property_readonly("stage_count", &Schedule::stage_count)
        .def_property_readonly("total_length", &Schedule::total_length)
        .def("L", &Schedule::L)
        .def("block_length", [](const Schedule& s, std::size_t i) { return s.stage(i).block_length; })
        .def("digit_at", &Schedule::digit_at)
        .def("locate", [](const Schedule& s, std::uint64_t n) {
            auto p = s.locate(n);
            return py::make_tuple(p.i, p.m, p.x, p.y);
        })
        .def("prefix", [](const std::shared_ptr<Schedule>& s, std::uint64_t n) {
            DigitStream stream(s);
            return stream.next_digits(n);
        });

    m.def("schedule_check", [](const std::string& preset_or_json, std::size_t horizon) {
        RunConfig c = config_from(preset_or_json);
        GoodReport r = c.symbolic ? validate_good_symbolic(make_symbolic(c), horizon)
                                  : validate_good(*materialize(c), horizon);
        return from_json_text(r.to_json());
    }, py::arg("preset_or_json"), py::arg("horizon") = 30);
    m.def("presets", &preset_names);

    m.def("qary_value", [](const Word& d, unsigned q, unsigned bits) { return value_dict(qary_value(d, q, bits)); },
          py::arg("digits"), py::arg("q"), py::arg("precision") = 128);
    m.def("lueroth_value", [](const Word& d, unsigned bits) { return value_dict(lueroth_value(d, bits)); },
          py::arg("digits"), py::arg("precision") = 128);
    m.def("beta_value", [](const Word& d, const std::string& e, unsigned bits) {
        return value_dict(beta_value(d, ParryData::parse(e), bits));
    }, py::arg("digits"), py::arg("expansion"), py::arg("precision") = 128);
    m.def("cf_value", [](const Word& d, unsigned bits) { return value_dict(cf_value(d, bits)); },
          py::arg("digits"), py::arg("precision") = 128);
}
