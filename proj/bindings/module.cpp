#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>
#include <utility>

#include "stableprobe/lru_cache.hpp"
#include "stableprobe/oracle.hpp"
#include "stableprobe/workload.hpp"

namespace py = pybind11;
using namespace stableprobe;

namespace {

using PyCache = LruCache<std::uint64_t, std::uint64_t, TabulatedHash>;

BenchTable make_table(std::size_t capacity, std::uint64_t seed) {
  return BenchTable(capacity, TabulatedHash(seed, capacity));
}

PyCache make_cache(std::size_t capacity, std::uint64_t seed, Variant eviction) {
  return PyCache(capacity, TabulatedHash(seed, PyCache::table_capacity_for(capacity)),
                 eviction);
}

}  // namespace

PYBIND11_MODULE(_stableprobe, m) {
  m.doc() = "linear-probing hash table with stable slot handles and minimal tombstones";

  py::register_exception<TableFullError>(m, "TableFullError", PyExc_RuntimeError);
  py::register_exception<StaleHandleError>(m, "StaleHandleError", PyExc_KeyError);

  py::enum_<SlotState>(m, "SlotState")
      .value("EMPTY", SlotState::Empty)
      .value("TOMBSTONE", SlotState::Tombstone)
      .value("OCCUPIED", SlotState::Occupied);

  py::enum_<Variant>(m, "Variant")
      .value("MINIMAL", Variant::Minimal)
      .value("NAIVE", Variant::Naive)
      .value("SHIFT", Variant::Shift);

  py::enum_<DeletePolicy>(m, "DeletePolicy")
      .value("FIFO", DeletePolicy::Fifo)
      .value("RANDOM", DeletePolicy::Random);

  py::class_<BenchTable>(m, "Table")
      .def(py::init(&make_table), py::arg("capacity"), py::arg("seed") = 1,
           "Fixed-capacity table over 64-bit keys; hash positions come from a "
           "seeded tabulated generator.")
      .def(
          "insert",
          [](BenchTable& t, std::uint64_t key, std::uint64_t value) {
            const auto res = t.insert(key, value);
            return py::make_tuple(res.ref.index, res.outcome == InsertOutcome::Inserted);
          },
          py::arg("key"), py::arg("value"),
          "Returns (slot, inserted); inserted is False for an in-place update.")
      .def(
          "find",
          [](const BenchTable& t, std::uint64_t key) {
            const auto res = t.find(key);
            return py::make_tuple(
                res.ref ? py::cast(res.ref->index) : py::none(), res.probes);
          },
          py::arg("key"), "Returns (slot or None, probes).")
      .def("remove", &BenchTable::remove, py::arg("key"),
           "Tombstone-minimizing removal; True if the key was present.")
      .def(
          "remove_naive",
          [](BenchTable& t, std::uint64_t key) { return remove_naive(t, key); },
          py::arg("key"), "Baseline removal that only ever marks tombstones.")
      .def(
          "remove_shift",
          [](BenchTable& t, std::uint64_t key) { return remove_shift(t, key); },
          py::arg("key"),
          "Baseline tombstone-free removal; invalidates slot handles.")
      .def(
          "read",
          [](const BenchTable& t, std::size_t slot) {
            const auto [key, value] = t.read(SlotRef{slot});
            return py::make_tuple(key, value);
          },
          py::arg("slot"), "Returns (key, value) stored at an occupied slot.")
      .def("state",
           [](const BenchTable& t, std::size_t slot) {
             if (slot >= t.capacity()) throw py::index_error("slot out of range");
             return t.state(slot);
           },
           py::arg("slot"))
      .def_property_readonly("capacity", &BenchTable::capacity)
      .def_property_readonly("tombstones", &BenchTable::tombstone_count)
      .def_property_readonly("empty_slots", &BenchTable::empty_count)
      .def("__len__", &BenchTable::size)
      .def("__contains__",
           [](const BenchTable& t, std::uint64_t key) { return t.find(key).ref.has_value(); })
      .def("dump", [](const BenchTable& t) { return t.dump(); },
           "One line per slot: index, state, key or dash, hash or dash.")
      .def(
          "check_invariants",
          [](const BenchTable& t) {
            py::list out;
            for (const auto& v : check_invariants(t))
              out.append(py::make_tuple(to_string(v.kind), v.index, v.detail));
            return out;
          },
          "Full invariant scan; an empty list means valid and minimal.")
      .def(
          "probe_costs",
          [](const BenchTable& t) {
            const auto costs = exact_probe_costs(t);
            return py::make_tuple(
                costs.successful ? py::cast(*costs.successful) : py::none(),
                costs.unsuccessful ? py::cast(*costs.unsuccessful) : py::none());
          },
          "Exact (successful, unsuccessful) probe-cost averages.");

  py::class_<MetricsRecord>(m, "MetricsRecord")
      .def(py::init<>())
      .def_readwrite("deletions", &MetricsRecord::deletions)
      .def_readwrite("avg_successful", &MetricsRecord::avg_successful)
      .def_readwrite("avg_unsuccessful", &MetricsRecord::avg_unsuccessful)
      .def_readwrite("tombstones", &MetricsRecord::tombstones)
      .def_readwrite("elements", &MetricsRecord::elements)
      .def(py::self == py::self)
      .def("__repr__", [](const MetricsRecord& r) {
        std::ostringstream os;
        os << "MetricsRecord(deletions=" << r.deletions
           << ", avg_successful=" << r.avg_successful
           << ", avg_unsuccessful=" << r.avg_unsuccessful
           << ", tombstones=" << r.tombstones << ", elements=" << r.elements << ")";
        return os.str();
      });

  py::class_<WorkloadConfig>(m, "WorkloadConfig")
      .def(py::init<>())
      .def_readwrite("capacity", &WorkloadConfig::capacity)
      .def_readwrite("alpha", &WorkloadConfig::alpha)
      .def_readwrite("policy", &WorkloadConfig::policy)
      .def_readwrite("rounds", &WorkloadConfig::rounds)
      .def_readwrite("measure_every", &WorkloadConfig::measure_every)
      .def_readwrite("seed", &WorkloadConfig::seed)
      .def_readwrite("variant", &WorkloadConfig::variant)
      .def("target_elements", &WorkloadConfig::target_elements)
      .def("validate", &WorkloadConfig::validate);

  m.def(
      "run_workload",
      [](const WorkloadConfig& config) {
        const auto result = run_workload(config);
        return py::make_tuple(result.records, result.saturated);
      },
      py::arg("config"),
      "Runs the churn experiment; returns (records, saturated).");

  m.def("to_csv", &to_csv, py::arg("records"));
  m.def("parse_csv", [](const std::string& text) { return parse_csv(text); },
        py::arg("text"));

  m.def(
      "run_invariant_check",
      [](std::uint64_t seed, std::uint64_t ops, std::size_t capacity) {
        const auto report = run_invariant_check(seed, ops, capacity);
        return py::make_tuple(report.ok, report.ops_run, report.message);
      },
      py::arg("seed") = 1, py::arg("ops") = 100000, py::arg("capacity") = 256,
      "Randomized oracle-equivalence sweep; returns (ok, ops_run, message).");

  py::class_<PyCache>(m, "LruCache")
      .def(py::init(&make_cache), py::arg("capacity"), py::arg("seed") = 1,
           py::arg("eviction") = Variant::Minimal,
           "LRU cache whose recency list lives inside table slots.")
      .def("put", &PyCache::put, py::arg("key"), py::arg("value"))
      .def(
          "get",
          [](PyCache& c, std::uint64_t key) -> py::object {
            const auto value = c.get(key);
            return value ? py::cast(*value) : py::none();
          },
          py::arg("key"))
      .def("__len__", &PyCache::size)
      .def_property_readonly("capacity", &PyCache::capacity)
      .def("keys", &PyCache::keys, "Keys in recency order, most recent first.")
      .def(
          "validate",
          [](const PyCache& c) -> py::object {
            const auto broken = c.validate();
            return broken ? py::cast(*broken) : py::none();
          },
          "None when the recency links are intact, else a description.");

  py::class_<TabulatedHash>(m, "TabulatedHash")
      .def(py::init<std::uint64_t, std::size_t>(), py::arg("seed"), py::arg("range"))
      .def("__call__", &TabulatedHash::operator(), py::arg("key"))
      .def_property_readonly("seed", &TabulatedHash::seed)
      .def_property_readonly("range", &TabulatedHash::range);
}
