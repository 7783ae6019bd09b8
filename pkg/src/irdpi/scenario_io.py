"""Plain-text scenario files.

::

    [labels]            # "size = k" (uniform prior) or "prior = p0,p1,..."
    size = 2
    [sites]
    names = A,B
    prior = 0.5,0.5     # omit and provide [coupling] for correlated y, s
    [coupling]          # optional row-major p(y, s); overrides priors
    joint = 0.25,0.25, 0.25,0.25
    [scanner.A]
    kind = bsc
    epsilon = 0.1
    [scanner.B]
    kind = explicit
    x_size = 3
    rows = 0.9,0.1,0.0, 0.1,0.9,0.0

Optional keys: ``names`` under ``[labels]``, an ``[observations]`` section
with ``size``, and ``delta`` for ``kind = erasure``.  ``#`` starts a comment.
"""
from __future__ import annotations

from .errors import ParseError, ValidationError
from .prob_core import Alphabet
from .scenarios import ScannerModel, Scenario

_SECTION_KEYS = {
    "labels": {"size", "prior", "names"},
    "sites": {"names", "prior"},
    "coupling": {"joint"},
    "observations": {"size"},
}
_SCANNER_KEYS = {
    "bsc": {"kind", "epsilon"},
    "erasure": {"kind", "delta"},
    "explicit": {"kind", "x_size", "rows"},
}


def _tokenize(text):
    """Yield ``(section, {key: (value, line)}, header_line)`` blocks in file order."""
    sections = []
    current = None
    for n, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            if not line.endswith("]") or len(line) < 3:
                raise ParseError(f"malformed section header {raw.strip()!r}", n)
            name = line[1:-1].strip()
            if any(name == s[0] for s in sections):
                raise ParseError(f"duplicate section [{name}]", n)
            current = (name, {}, n)
            sections.append(current)
            continue
        if current is None:
            raise ParseError("key outside of any section", n)
        if "=" not in line:
            raise ParseError(f"expected 'key = value', got {raw.strip()!r}", n)
        key, value = (p.strip() for p in line.split("=", 1))
        if key in current[1]:
            raise ParseError(f"duplicate key {key!r} in [{current[0]}]", n)
        current[1][key] = (value, n)
    return sections


def _floats(value, line, what):
    try:
        return tuple(float(v) for v in value.split(",") if v.strip() != "")
    except ValueError:
        raise ParseError(f"{what}: {value!r} is not a comma-separated list of numbers", line) from None


def _int(value, line, what):
    try:
        n = int(value)
    except ValueError:
        raise ParseError(f"{what}: {value!r} is not an integer", line) from None
    if n < 1:
        raise ParseError(f"{what}: must be positive", line)
    return n


def _names(value):
    return tuple(v.strip() for v in value.split(",") if v.strip())


def parse_scenario(text: str) -> Scenario:
    """Parse scenario file contents.  Raises :class:`ParseError` naming the line."""
    blocks = _tokenize(text)
    plain = {}
    scanners = []
    for name, keys, line in blocks:
        if name.startswith("scanner."):
            scanners.append((name[len("scanner."):].strip(), keys, line))
            continue
        if name not in _SECTION_KEYS:
            raise ParseError(f"unknown section [{name}]", line)
        for key, (_, kline) in keys.items():
            if key not in _SECTION_KEYS[name]:
                raise ParseError(f"unknown key {key!r} in [{name}]", kline)
        plain[name] = (keys, line)

    if "labels" not in plain:
        raise ParseError("missing [labels] section")
    lkeys, lline = plain["labels"]
    size = _int(*lkeys["size"], "labels size") if "size" in lkeys else None
    prior = _floats(*lkeys["prior"], "labels prior") if "prior" in lkeys else None
    if size is None and prior is None:
        raise ParseError("[labels] needs 'size' or 'prior'", lline)
    if size is not None and prior is not None and len(prior) != size:
        raise ParseError(f"labels prior has {len(prior)} entries but size is {size}", lkeys["prior"][1])
    ny = size if size is not None else len(prior)
    label_names = _names(lkeys["names"][0]) if "names" in lkeys else None

    if "sites" not in plain:
        raise ParseError("missing [sites] section")
    skeys, sline = plain["sites"]
    if "names" not in skeys:
        raise ParseError("[sites] needs 'names'", sline)
    site_names = _names(skeys["names"][0])
    ns = len(site_names)
    site_prior = _floats(*skeys["prior"], "sites prior") if "prior" in skeys else None

    joint = None
    if "coupling" in plain:
        ckeys, cline = plain["coupling"]
        if "joint" not in ckeys:
            raise ParseError("[coupling] needs 'joint'", cline)
        joint = _floats(*ckeys["joint"], "coupling joint")
        if len(joint) != ny * ns:
            raise ParseError(f"coupling joint has {len(joint)} entries, expected {ny}x{ns}", ckeys["joint"][1])
    else:
        if prior is None:
            prior = tuple(1.0 / ny for _ in range(ny))
        if site_prior is None:
            site_prior = tuple(1.0 / ns for _ in range(ns))

    models = []
    for site, keys, line in scanners:
        if site not in site_names:
            raise ParseError(f"scanner for undeclared site {site!r}", line)
        if "kind" not in keys:
            raise ParseError(f"[scanner.{site}] needs 'kind'", line)
        kind, kline = keys["kind"]
        if kind not in _SCANNER_KEYS:
            raise ParseError(f"[scanner.{site}]: unknown kind {kind!r}", kline)
        for key, (_, n) in keys.items():
            if key not in _SCANNER_KEYS[kind]:
                raise ParseError(f"unknown key {key!r} in [scanner.{site}] (kind {kind})", n)
        try:
            if kind == "bsc":
                if "epsilon" not in keys:
                    raise ParseError(f"[scanner.{site}] needs 'epsilon'", line)
                (eps,) = _floats(*keys["epsilon"], "epsilon")
                models.append(ScannerModel.bsc(site, eps))
            elif kind == "erasure":
                if "delta" not in keys:
                    raise ParseError(f"[scanner.{site}] needs 'delta'", line)
                (delta,) = _floats(*keys["delta"], "delta")
                models.append(ScannerModel.erasure(site, delta))
            else:
                if "x_size" not in keys or "rows" not in keys:
                    raise ParseError(f"[scanner.{site}] needs 'x_size' and 'rows'", line)
                nx = _int(*keys["x_size"], "x_size")
                flat = _floats(*keys["rows"], "rows")
                if len(flat) != ny * nx:
                    raise ParseError(f"[scanner.{site}]: rows has {len(flat)} entries, expected {ny}x{nx}",
                                     keys["rows"][1])
                rows = [flat[i * nx:(i + 1) * nx] for i in range(ny)]
                for i, r in enumerate(rows):
                    if abs(sum(r) - 1.0) > 1e-6:
                        raise ParseError(f"[scanner.{site}]: row {i} sums to {sum(r)!r}, not 1",
                                         keys["rows"][1])
                models.append(ScannerModel(site, "explicit", rows=tuple(rows), x_size=nx))
        except ValueError as exc:
            if isinstance(exc, ParseError):
                raise
            raise ParseError(f"[scanner.{site}]: {exc}", line) from None
        except TypeError:
            raise ParseError(f"[scanner.{site}]: expected a single number", line) from None

    order = {s: i for i, s in enumerate(site_names)}
    models.sort(key=lambda m: order[m.site])
    if "observations" in plain:
        okeys, oline = plain["observations"]
        if "size" not in okeys:
            raise ParseError("[observations] needs 'size'", oline)
        nx = _int(*okeys["size"], "observations size")
    elif models:
        nx = max(m.required_x_size(ny) for m in models)
    else:
        raise ParseError("no scanners declared")
    try:
        scenario = Scenario(
            Alphabet("y", ny, label_names),
            Alphabet("s", ns, site_names),
            Alphabet("x", nx),
            tuple(models),
            label_prior=None if joint is not None else prior,
            site_prior=None if joint is not None else site_prior,
            joint_ys=joint,
        )
        for m in models:
            m.table(ny, nx)
    except ValidationError as exc:
        raise ParseError(str(exc)) from None
    missing = [s for s in site_names if scenario.scanner(s) is None]
    if missing and scenario.independent:
        raise ParseError(f"no scanner for site(s) {', '.join(missing)}")
    return scenario


def _fmt(values):
    return ",".join(repr(float(v)) for v in values)


def serialize_scenario(scenario: Scenario) -> str:
    """Inverse of :func:`parse_scenario`; floats are written with ``repr`` (lossless)."""
    ys, ss = scenario.label_alphabet, scenario.site_alphabet
    out = ["[labels]", f"size = {ys.size}"]
    if ys.labels != tuple(str(i) for i in range(ys.size)):
        out.append(f"names = {','.join(ys.labels)}")
    if scenario.independent:
        out.append(f"prior = {_fmt(scenario.label_prior)}")
    out += ["[sites]", f"names = {','.join(ss.labels)}"]
    if scenario.independent:
        out.append(f"prior = {_fmt(scenario.site_prior)}")
    else:
        out += ["[coupling]", f"joint = {_fmt(scenario.joint_ys)}"]
    out += ["[observations]", f"size = {scenario.observation_alphabet.size}"]
    for sc in scenario.scanners:
        out += [f"[scanner.{sc.site}]", f"kind = {sc.kind}"]
        if sc.kind == "bsc":
            out.append(f"epsilon = {sc.param!r}")
        elif sc.kind == "erasure":
            out.append(f"delta = {sc.param!r}")
        else:
            out.append(f"x_size = {sc.x_size}")
            out.append(f"rows = {_fmt(v for r in sc.rows for v in r)}")
    return "\n".join(out) + "\n"


def read_scenario(path) -> Scenario:
    with open(path, encoding="utf-8") as fh:
        return parse_scenario(fh.read())
