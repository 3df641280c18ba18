#include "qarch/circuit.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qarch::vqc {

void CircuitSpec::add_rotation(qsim::GateKind kind, int qubit, double initial_angle) {
    if (kind == qsim::GateKind::Cnot) {
        throw std::invalid_argument("circuit: add_rotation called with CNOT kind");
    }
    gates.push_back(qsim::GateOp::rotation(kind, qubit, 0.0));
    params.push_back(initial_angle);
}

void CircuitSpec::add_cnot(int control, int target) {
    gates.push_back(qsim::GateOp::cnot(control, target));
}

std::vector<qsim::GateOp> CircuitSpec::resolved_gates() const {
    std::vector<qsim::GateOp> out = gates;
    std::size_t k = 0;
    for (auto& g : out) {
        if (g.is_rotation()) g.angle = params[k++];
    }
    if (k != params.size()) {
        throw std::logic_error("circuit: rotation count does not match params length");
    }
    return out;
}

void CircuitSpec::apply_to(qsim::Statevector& state) const {
    std::size_t k = 0;
    for (const auto& g : gates) {
        if (g.is_rotation()) {
            qsim::GateOp resolved = g;
            resolved.angle = params[k++];
            state.apply(resolved);
        } else {
            state.apply(g);
        }
    }
}

bool same_structure(const CircuitSpec& a, const CircuitSpec& b) {
    if (a.n_qubits != b.n_qubits || a.gates.size() != b.gates.size()) return false;
    for (std::size_t i = 0; i < a.gates.size(); ++i) {
        const auto& ga = a.gates[i];
        const auto& gb = b.gates[i];
        if (ga.kind != gb.kind || ga.target != gb.target) return false;
        if (ga.kind == qsim::GateKind::Cnot && ga.control != gb.control) return false;
    }
    return true;
}

namespace {

const char* kind_name(qsim::GateKind k) {
    switch (k) {
        case qsim::GateKind::RotX: return "RX";
        case qsim::GateKind::RotY: return "RY";
        case qsim::GateKind::RotZ: return "RZ";
        case qsim::GateKind::Cnot: return "CNOT";
    }
    return "?";
}

}  // namespace

void write_circuit(const CircuitSpec& c, const std::filesystem::path& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("write_circuit: cannot open " + path.string());
    os << "# n_qubits=" << c.n_qubits << " readout=" << c.readout_qubit << '\n';
    char buf[64];
    std::size_t k = 0;
    for (const auto& g : c.gates) {
        if (g.is_rotation()) {
            std::snprintf(buf, sizeof(buf), "%s %d %.6f", kind_name(g.kind), g.target,
                          c.params[k++]);
            os << buf << '\n';
        } else {
            os << "CNOT " << g.control << ' ' << g.target << '\n';
        }
    }
}

CircuitSpec read_circuit(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("read_circuit: cannot open " + path.string());
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("read_circuit: empty file");

    CircuitSpec c;
    if (std::sscanf(line.c_str(), "# n_qubits=%d readout=%d", &c.n_qubits, &c.readout_qubit) != 2) {
        throw std::runtime_error("read_circuit: malformed header: " + line);
    }
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        std::string kind;
        ss >> kind;
        if (kind == "CNOT") {
            int control = 0, target = 0;
            if (!(ss >> control >> target)) {
                throw std::runtime_error("read_circuit: malformed CNOT line: " + line);
            }
            c.add_cnot(control, target);
        } else {
            int qubit = 0;
            double angle = 0.0;
            if (!(ss >> qubit >> angle)) {
                throw std::runtime_error("read_circuit: malformed rotation line: " + line);
            }
            qsim::GateKind k;
            if (kind == "RX") k = qsim::GateKind::RotX;
            else if (kind == "RY") k = qsim::GateKind::RotY;
            else if (kind == "RZ") k = qsim::GateKind::RotZ;
            else throw std::runtime_error("read_circuit: unknown gate kind: " + kind);
            c.add_rotation(k, qubit, angle);
        }
    }
    return c;
}

}  // namespace qarch::vqc
