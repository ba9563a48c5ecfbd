"""Line-oriented text format and its JSON mirror for circuits.

One gate per line after a `QUBITS <q> ANCILLA <comma list>` header. Reals
are printed with 17 significant digits so floats round-trip bit-exactly.
Blank lines and `#` comments are ignored on input.
"""

from __future__ import annotations

import json

from .circuits import Circuit
from .errors import CircuitParseError, FFQRAMError
from .gates import (ClassicalXLayer, CnNot, CnRotArbitrary, CnRotY, CSwap,
                    Gate, H, Phase, RotY, SubspaceH3, Swap, Toffoli, X)


def _real(x: float) -> str:
    return f"{x:.17g}"


def _int_list(values) -> str:
    return ",".join(str(v) for v in values)


def _gate_line(g: Gate) -> str:
    if isinstance(g, ClassicalXLayer):
        return f"CXLAYER {g.bits} q={_int_list(g.qubits)}"
    if isinstance(g, H):
        return f"H {g.qubit}"
    if isinstance(g, RotY):
        return f"RY {g.qubit} {_real(g.theta)}"
    if isinstance(g, Phase):
        return f"PHASE {g.qubit} {_real(g.phi)}"
    if isinstance(g, X):
        return f"X {g.qubit}"
    if isinstance(g, CnRotY):
        return f"CNRY c={_int_list(g.controls)} t={g.target} {_real(g.theta)}"
    if isinstance(g, CnRotArbitrary):
        return (f"CNR c={_int_list(g.controls)} t={g.target} "
                f"{_real(g.theta)} {_real(g.phi)}")
    if isinstance(g, CnNot):
        return f"CNNOT c={_int_list(g.controls)} t={g.target}"
    if isinstance(g, Toffoli):
        return f"TOFFOLI {g.c1} {g.c2} {g.target}"
    if isinstance(g, Swap):
        return f"SWAP {g.a} {g.b}"
    if isinstance(g, CSwap):
        return f"CSWAP {g.control} {g.a} {g.b}"
    if isinstance(g, SubspaceH3):
        return f"H3 {g.qa} {g.qb}"
    raise FFQRAMError(f"cannot serialize gate kind {type(g).__name__}")


def serialize(circuit: Circuit) -> str:
    header = f"QUBITS {circuit.num_qubits} ANCILLA"
    if circuit.ancilla_qubits:
        header += f" {_int_list(sorted(circuit.ancilla_qubits))}"
    lines = [header]
    lines.extend(_gate_line(g) for g in circuit.gates)
    return "\n".join(lines) + "\n"


class _LineParser:
    def __init__(self, line_no: int, tokens: list[str]):
        self.line_no = line_no
        self.tokens = tokens
        self.at = 1  # tokens[0] is the opcode

    def fail(self, reason: str):
        raise CircuitParseError(self.line_no, reason)

    def take(self, what: str) -> str:
        if self.at >= len(self.tokens):
            self.fail(f"missing {what}")
        tok = self.tokens[self.at]
        self.at += 1
        return tok

    def take_int(self, what: str) -> int:
        tok = self.take(what)
        try:
            return int(tok)
        except ValueError:
            self.fail(f"{what} must be an integer, got {tok!r}")

    def take_real(self, what: str) -> float:
        tok = self.take(what)
        try:
            return float(tok)
        except ValueError:
            self.fail(f"{what} must be a real number, got {tok!r}")

    def take_tagged_ints(self, tag: str) -> tuple[int, ...]:
        tok = self.take(f"{tag}=<list>")
        if not tok.startswith(f"{tag}="):
            self.fail(f"expected {tag}=<list>, got {tok!r}")
        body = tok[len(tag) + 1:]
        if not body:
            self.fail(f"empty list after {tag}=")
        try:
            return tuple(int(v) for v in body.split(","))
        except ValueError:
            self.fail(f"bad integer list after {tag}=: {body!r}")

    def done(self):
        if self.at != len(self.tokens):
            self.fail(f"trailing tokens: {' '.join(self.tokens[self.at:])}")


def _parse_gate(line_no: int, tokens: list[str]) -> Gate:
    p = _LineParser(line_no, tokens)
    op = tokens[0]
    try:
        if op == "CXLAYER":
            bits = p.take("bitstring")
            qubits = p.take_tagged_ints("q")
            p.done()
            return ClassicalXLayer(bits, qubits)
        if op == "H":
            g = H(p.take_int("qubit"))
            p.done()
            return g
        if op == "RY":
            g = RotY(p.take_int("qubit"), p.take_real("theta"))
            p.done()
            return g
        if op == "PHASE":
            g = Phase(p.take_int("qubit"), p.take_real("phi"))
            p.done()
            return g
        if op == "X":
            g = X(p.take_int("qubit"))
            p.done()
            return g
        if op == "CNRY":
            c = p.take_tagged_ints("c")
            t = p.take("t=<qubit>")
            if not t.startswith("t="):
                p.fail(f"expected t=<qubit>, got {t!r}")
            g = CnRotY(c, int(t[2:]), p.take_real("theta"))
            p.done()
            return g
        if op == "CNR":
            c = p.take_tagged_ints("c")
            t = p.take("t=<qubit>")
            if not t.startswith("t="):
                p.fail(f"expected t=<qubit>, got {t!r}")
            g = CnRotArbitrary(c, int(t[2:]), p.take_real("theta"),
                               p.take_real("phi"))
            p.done()
            return g
        if op == "CNNOT":
            c = p.take_tagged_ints("c")
            t = p.take("t=<qubit>")
            if not t.startswith("t="):
                p.fail(f"expected t=<qubit>, got {t!r}")
            g = CnNot(c, int(t[2:]))
            p.done()
            return g
        if op == "TOFFOLI":
            g = Toffoli(p.take_int("control 1"), p.take_int("control 2"),
                        p.take_int("target"))
            p.done()
            return g
        if op == "SWAP":
            g = Swap(p.take_int("qubit a"), p.take_int("qubit b"))
            p.done()
            return g
        if op == "CSWAP":
            g = CSwap(p.take_int("control"), p.take_int("qubit a"),
                      p.take_int("qubit b"))
            p.done()
            return g
        if op == "H3":
            g = SubspaceH3(p.take_int("qubit a"), p.take_int("qubit b"))
            p.done()
            return g
    except CircuitParseError:
        raise
    except (ValueError, FFQRAMError) as exc:
        raise CircuitParseError(line_no, str(exc)) from exc
    raise CircuitParseError(line_no, f"unknown opcode {op!r}")


def parse(text: str) -> Circuit:
    num_qubits = None
    ancilla: tuple[int, ...] = ()
    gates: list[Gate] = []
    header_seen = False
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if not header_seen:
            if tokens[0] != "QUBITS":
                raise CircuitParseError(line_no,
                                        "first line must be QUBITS header")
            p = _LineParser(line_no, tokens)
            num_qubits = p.take_int("qubit count")
            kw = p.take("ANCILLA keyword")
            if kw != "ANCILLA":
                p.fail(f"expected ANCILLA, got {kw!r}")
            if p.at < len(tokens):
                body = p.take("ancilla list")
                try:
                    ancilla = tuple(int(v) for v in body.split(","))
                except ValueError:
                    p.fail(f"bad ancilla list {body!r}")
            p.done()
            header_seen = True
            continue
        gates.append(_parse_gate(line_no, tokens))
    if not header_seen:
        raise CircuitParseError(1, "missing QUBITS header")
    try:
        return Circuit(num_qubits, tuple(gates), frozenset(ancilla))
    except FFQRAMError as exc:
        raise CircuitParseError(1, f"invalid circuit: {exc}") from exc


# JSON mirror ---------------------------------------------------------------

def _gate_obj(g: Gate) -> dict:
    if isinstance(g, ClassicalXLayer):
        return {"kind": "CXLAYER", "bits": g.bits, "q": list(g.qubits)}
    if isinstance(g, H):
        return {"kind": "H", "q": g.qubit}
    if isinstance(g, RotY):
        return {"kind": "RY", "q": g.qubit, "theta": g.theta}
    if isinstance(g, Phase):
        return {"kind": "PHASE", "q": g.qubit, "phi": g.phi}
    if isinstance(g, X):
        return {"kind": "X", "q": g.qubit}
    if isinstance(g, CnRotY):
        return {"kind": "CNRY", "c": list(g.controls), "t": g.target,
                "theta": g.theta}
    if isinstance(g, CnRotArbitrary):
        return {"kind": "CNR", "c": list(g.controls), "t": g.target,
                "theta": g.theta, "phi": g.phi}
    if isinstance(g, CnNot):
        return {"kind": "CNNOT", "c": list(g.controls), "t": g.target}
    if isinstance(g, Toffoli):
        return {"kind": "TOFFOLI", "c1": g.c1, "c2": g.c2, "t": g.target}
    if isinstance(g, Swap):
        return {"kind": "SWAP", "a": g.a, "b": g.b}
    if isinstance(g, CSwap):
        return {"kind": "CSWAP", "c": g.control, "a": g.a, "b": g.b}
    if isinstance(g, SubspaceH3):
        return {"kind": "H3", "qa": g.qa, "qb": g.qb}
    raise FFQRAMError(f"cannot serialize gate kind {type(g).__name__}")


_JSON_BUILDERS = {
    "CXLAYER": lambda o: ClassicalXLayer(o["bits"], tuple(o["q"])),
    "H": lambda o: H(o["q"]),
    "RY": lambda o: RotY(o["q"], o["theta"]),
    "PHASE": lambda o: Phase(o["q"], o["phi"]),
    "X": lambda o: X(o["q"]),
    "CNRY": lambda o: CnRotY(tuple(o["c"]), o["t"], o["theta"]),
    "CNR": lambda o: CnRotArbitrary(tuple(o["c"]), o["t"], o["theta"],
                                    o["phi"]),
    "CNNOT": lambda o: CnNot(tuple(o["c"]), o["t"]),
    "TOFFOLI": lambda o: Toffoli(o["c1"], o["c2"], o["t"]),
    "SWAP": lambda o: Swap(o["a"], o["b"]),
    "CSWAP": lambda o: CSwap(o["c"], o["a"], o["b"]),
    "H3": lambda o: SubspaceH3(o["qa"], o["qb"]),
}


def serialize_json(circuit: Circuit) -> str:
    obj = {
        "qubits": circuit.num_qubits,
        "ancilla": sorted(circuit.ancilla_qubits),
        "gates": [_gate_obj(g) for g in circuit.gates],
    }
    return json.dumps(obj, indent=2)


def parse_json(text: str) -> Circuit:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CircuitParseError(exc.lineno, f"bad JSON: {exc.msg}") from exc
    try:
        gates = []
        for i, gobj in enumerate(obj["gates"]):
            kind = gobj.get("kind")
            if kind not in _JSON_BUILDERS:
                raise CircuitParseError(i + 1, f"unknown gate kind {kind!r}")
            gates.append(_JSON_BUILDERS[kind](gobj))
        return Circuit(obj["qubits"], tuple(gates),
                       frozenset(obj.get("ancilla", ())))
    except CircuitParseError:
        raise
    except (KeyError, TypeError, ValueError, FFQRAMError) as exc:
        raise CircuitParseError(1, f"invalid circuit object: {exc}") from exc
