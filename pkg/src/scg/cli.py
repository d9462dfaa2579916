"""Command line front end.

Every command writes one JSON report (or DOT/CSV where asked).  Reports
carry the tool version and the resolved configuration, and contain no
timestamps, so the same configuration always produces the same bytes.
"""
from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction
from pathlib import Path

from scg import __version__
from scg.cayley import BallError, ContractionProfile, build_ball, fit_profile, geodesic_power_check, intersection_profile
from scg.dehn import NotCertified, PresentationOracle, are_equal, is_trivial
from scg.families import (
    DEFAULT_START,
    KINDS,
    FamilyError,
    FamilySpec,
    enumerate_relators,
    family_presentation,
    make_spec,
    stream,
)
from scg.presentation import Presentation, PresentationError, check_small_cancellation, longest_pieces, power_spectrum
from scg.saturation import classification_table, nth_power_mask, word_mask
from scg.supergroup import SupergroupError, build_supergroup, cycles_to_dot, verify_supergroup
from scg.words import Alphabet, UnknownSymbolError, WordSyntaxError, cyclic_reduce

EXIT_OK, EXIT_CHECK, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class CheckFailed(Exception):
    """Raised after the report is written when a verified property fails."""


def rat(x) -> dict:
    x = Fraction(x)
    return {"num": x.numerator, "den": x.denominator}


def parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def parse_int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in re.split(r"[,\s]+", text.strip()) if x]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a list of integers: {text!r}") from None


# -- sources ------------------------------------------------------------------------

def family_spec(args) -> FamilySpec | None:
    if getattr(args, "file", None):
        return make_spec("user_file", path=args.file)
    if not getattr(args, "family", None):
        return None
    return make_spec(args.family, args.range, f=args.f, rho=args.rho, tau=args.tau, g=args.g)


def need_spec(args) -> FamilySpec:
    spec = family_spec(args)
    if spec is None:
        raise UsageError("give --family KIND (with --range) or --file PRESENTATION.json")
    return spec


def window(args) -> Presentation:
    if getattr(args, "file", None):
        pres = Presentation.load(_existing(args.file))
        if args.max_length is not None:
            pres = pres.subset(i for i, r in enumerate(pres.relators) if len(r) <= args.max_length)
        return pres
    spec = need_spec(args)
    if args.max_length is not None:
        return enumerate_relators(spec, args.max_length)
    return family_presentation(spec)


def equality_source(args):
    """A Presentation for --file, otherwise the family spec itself."""
    if getattr(args, "file", None):
        return Presentation.load(_existing(args.file))
    return need_spec(args)


def _existing(path) -> Path:
    p = Path(path)
    if not p.exists():
        raise UsageError(f"file not found: {p}")
    return p


_FRESH = {"glnc_super": "x", "countable": "y"}


def source_alphabet(args, *texts) -> Alphabet:
    """Alphabet in which user words are parsed, matching the family's letter numbering."""
    if getattr(args, "file", None):
        return Presentation.load(_existing(args.file)).alphabet
    spec = family_spec(args)
    if spec is None:
        alpha = Alphabet(extensible=True)
        for t in texts:
            if t:
                alpha.parse(t)
        return alpha.copy(extensible=False)
    names = list(stream(spec).base)
    prefix = _FRESH.get(spec.kind)
    if prefix:
        nums = [int(n) for t in texts if t for n in re.findall(rf"\b{prefix}(\d+)\b", t)]
        names += [f"{prefix}{i}" for i in range(1, max(nums, default=0) + 1)]
    return Alphabet(names)


def parse_word(alpha: Alphabet, text: str, what: str = "word"):
    if text is None:
        raise UsageError(f"--{what} is required")
    return alpha.parse(text)


# -- commands ---------------------------------------------------------------

def cmd_families_list(args):
    return {"kinds": [{"kind": k, "default_start": DEFAULT_START[k]} for k in KINDS]}


def cmd_families_emit(args):
    pres = window(args)
    return {"presentation": pres.to_json(), "relator_count": len(pres), "lengths": [len(r) for r in pres.relators]}


def _piece_rows(pres, rep):
    A = pres.alphabet
    rows = []
    for x in rep.per_relator:
        row = {"index": pres.indices[x.relator], "length": x.length, "p": x.p, "piece": A.format(x.piece)}
        if x.witnesses:
            row["witnesses"] = [
                {"relator": pres.indices[o.relator], "orientation": o.orientation, "rotation": o.rotation}
                for o in x.witnesses
            ]
        rows.append(row)
    return rows


def cmd_sc_check(args):
    pres = window(args)
    rep = longest_pieces(pres)
    sc = check_small_cancellation(pres, args.lam, rep)
    A = pres.alphabet
    out = {
        "lambda": rat(sc.lam),
        "holds": sc.holds,
        "lambda_star": rat(sc.lambda_star),
        "relators": len(pres),
        "violations": [
            {"relator": pres.indices[i], "piece": A.format(piece), "piece_length": lp, "relator_length": lr}
            for piece, i, lp, lr in sc.violations
        ],
    }
    return out, (None if sc.holds else "C'(lambda) fails")


def cmd_pieces(args):
    pres = window(args)
    rep = longest_pieces(pres)
    return {"lambda_star": rat(rep.lambda_star), "relators": _piece_rows(pres, rep)}


def cmd_power_spectrum(args):
    pres = window(args)
    arcs, top = power_spectrum(pres)
    A = pres.alphabet
    return {
        "max_exponent": top,
        "relators": [
            {"index": pres.indices[i], "length": len(pres.relators[i]), "root": A.format(a.root), "exponent": a.exponent, "start": a.start}
            for i, a in enumerate(arcs)
        ],
    }


def _mask_json(mask):
    return "".join("1" if f else "0" for f in mask.flags())


def cmd_sat(args):
    if args.word is not None:
        alpha = source_alphabet(args, args.word, args.pattern)
        v = cyclic_reduce(parse_word(alpha, args.word))[0]
        if not len(v):
            raise UsageError("--word is trivial after cyclic reduction")
        targets = [(None, v)]
    else:
        pres = window(args)
        alpha = pres.alphabet
        targets = list(zip(pres.indices, pres.relators))
    rows = []
    for idx, v in targets:
        if args.n is not None:
            mask = nth_power_mask(args.n, v)
            label = {"n": args.n}
        else:
            w = parse_word(alpha, args.pattern, "pattern")
            mask = word_mask(w, args.m, v)
            label = {"pattern": alpha.format(w), "m": args.m}
        row = {"length": mask.length, "covered": mask.covered, "sat": rat(Fraction(mask.covered, mask.length)), **label}
        if args.mask:
            row["mask"] = _mask_json(mask)
        if idx is not None:
            row["index"] = idx
        rows.append(row)
    if args.word is not None:
        return rows[0]
    return {"relators": rows}


def cmd_classify(args):
    pres = window(args)
    w = parse_word(pres.alphabet, args.w, "w")
    table = classification_table(pres, w, args.m_list)
    if args.csv:
        Path(args.csv).write_text(table.to_csv())
    rows = []
    for r in table.rows:
        rows.append({
            "index": r.index,
            "length": r.length,
            "p": r.p,
            "sat": [rat(s) for s in r.sats],
            "product": [rat(s) for s in r.products],
        })
    return {
        "w": pres.alphabet.format(w),
        "m_list": list(table.m_list),
        "rows": rows,
        "running_sup": [[rat(x) for x in col] for col in table.running_sup],
        "limsup_estimate": [[rat(x) for x in col] for col in table.limsup_estimate],
        "sparse_evidence": list(table.sparse_evidence),
    }


def _supergroup(args):
    pres = window(args)
    w = parse_word(pres.alphabet, args.w, "w")
    alen = args.alpha_length
    return build_supergroup(pres, w, window_factor=args.window_factor, alpha_length=alen)


def cmd_supergroup_build(args):
    res = _supergroup(args)
    out = res.to_json()
    if args.emit:
        Path(args.emit).write_text(_dumps(res.relators.to_json()))
    return out


def cmd_supergroup_verify(args):
    res = _supergroup(args)
    rep = verify_supergroup(res)
    out = {"construction": res.to_json(), "verification": rep.to_json()}
    return out, (None if rep.passed else "supergroup verification failed")


def _transcript(trace, alpha) -> str:
    f = alpha.format
    lines = [f"input: {f(trace.word) or '1'}", f"conjugator: {f(trace.conjugator) or '1'}"]
    for k, st in enumerate(trace.steps, 1):
        lines.append(
            f"step {k}: at {st.start} replace {st.length} letters of relator {st.relator}"
            f" -> {f(st.after) or '1'}"
        )
    lines.append(f"result: {'trivial' if trace.trivial else 'nontrivial'} ({f(trace.final) or '1'})")
    return "\n".join(lines) + "\n"


def _word_query(args, equal: bool):
    src = equality_source(args)
    alpha = source_alphabet(args, args.word, args.word2)
    w1 = parse_word(alpha, args.word)
    if equal:
        w2 = parse_word(alpha, args.word2, "word2")
    if isinstance(src, Presentation):
        oracle = PresentationOracle(src)
        ok, trace = oracle.are_equal(w1, w2) if equal else oracle.is_trivial(w1)
    else:
        ok, trace = are_equal(w1, w2, src) if equal else is_trivial(w1, src)
    out = {"equal" if equal else "trivial": ok, "steps": len(trace.steps)}
    if args.trace:
        out["trace"] = trace.to_json(alpha)
        sys.stderr.write(_transcript(trace, alpha))
    return out


def cmd_word_trivial(args):
    return _word_query(args, False)


def cmd_word_equal(args):
    return _word_query(args, True)


def _profile(args):
    pres = window(args)
    w = parse_word(pres.alphabet, args.w, "w")
    return pres, intersection_profile(pres, w, jobs=args.jobs)


def cmd_profile_intersection(args):
    pres, prof = _profile(args)
    if args.csv:
        Path(args.csv).write_text(prof.to_csv())
    return {"profile": prof.to_json(pres.alphabet)}


def cmd_profile_fit(args):
    if args.profile:
        data = json.loads(_existing(args.profile).read_text())
        data = data.get("result", data).get("profile", data)
        prof = ContractionProfile.from_json(data)
        alpha = None
    else:
        pres, prof = _profile(args)
        alpha = pres.alphabet
    return {"profile": prof.to_json(alpha), "fit": fit_profile(prof).to_json()}


def cmd_ball_build(args):
    ball = build_ball(equality_source(args), args.radius)
    if args.dot:
        Path(args.dot).write_text(ball.to_dot())
    return ball.to_json()


def cmd_ball_geodesic(args):
    src = equality_source(args)
    alpha = source_alphabet(args, args.w)
    w = parse_word(alpha, args.w, "w")
    rep = geodesic_power_check(src, w, args.n_max)
    return rep.to_json(alpha), (None if rep.passed else f"d(1, w^n) < n|w| first at n = {rep.first_failure}")


def cmd_export_dot(args):
    if args.what == "ball":
        if args.radius is None:
            raise UsageError("--radius is required for a ball export")
        return build_ball(equality_source(args), args.radius).to_dot()
    res = _supergroup(args)
    cycles = res.d_cycles()
    if args.limit is not None:
        cycles = cycles[: args.limit]
    return cycles_to_dot(cycles, res.alphabet, "supergroup")


# -- parser -------------------------------------------------------------------

def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("run")
    g.add_argument("--config", help="JSON file with the command and its options")
    g.add_argument("--out", help="write the report here instead of stdout")
    g.add_argument("--jobs", type=int, default=1, help="worker processes for per-relator work")
    g.add_argument("--seed", type=int, default=0, help="recorded in the report; commands are deterministic")
    f = p.add_argument_group("relators")
    f.add_argument("--family", choices=KINDS)
    f.add_argument("--range", help="index range such as 12..20 or 12..")
    f.add_argument("--f")
    f.add_argument("--rho")
    f.add_argument("--tau")
    f.add_argument("--g", help="base word for the commutator family")
    f.add_argument("--file", help="presentation JSON")
    f.add_argument("--max-length", type=int, help="keep relators of at most this length")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    top = argparse.ArgumentParser(prog="scg", description="Small cancellation relator families and saturation tools.")
    top.add_argument("--version", action="version", version=f"scg {__version__}")
    sub = top.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    def leaf(parent, name, func, help_text):
        p = parent.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(func=func)
        return p

    def group(name, help_text):
        p = sub.add_parser(name, help=help_text)
        s = p.add_subparsers(dest="action", metavar="ACTION")
        s.required = True
        return s

    fam = group("families", "list family kinds or emit relators")
    leaf(fam, "list", cmd_families_list, "list family kinds")
    leaf(fam, "emit", cmd_families_emit, "emit a presentation")

    p = leaf(sub, "sc-check", cmd_sc_check, "check C'(lambda)")
    p.add_argument("--lambda", dest="lam", type=parse_fraction, default=Fraction(1, 6))
    leaf(sub, "pieces", cmd_pieces, "longest piece of each relator")
    leaf(sub, "power-spectrum", cmd_power_spectrum, "largest power arc of each relator")

    p = leaf(sub, "sat", cmd_sat, "w-saturation or saturation by n-th powers")
    p.add_argument("--word", help="cyclic word to measure (default: every relator)")
    p.add_argument("--pattern", help="the word w")
    p.add_argument("--m", type=int, default=1, help="measure against w^m")
    p.add_argument("--n", type=int, help="saturation by n-th powers instead of a pattern")
    p.add_argument("--mask", action="store_true", help="include the covered-edge mask")

    p = leaf(sub, "classify", cmd_classify, "saturation table over a window")
    p.add_argument("--w", required=True)
    p.add_argument("--m-list", type=parse_int_list, default=[1, 2, 4, 8])
    p.add_argument("--csv", help="also write the table as CSV")

    sg = group("supergroup", "cycle-splitting construction")
    for name, func in (("build", cmd_supergroup_build), ("verify", cmd_supergroup_verify)):
        p = leaf(sg, name, func, f"{name} the construction")
        p.add_argument("--w", required=True)
        p.add_argument("--window-factor", type=int, default=6)
        p.add_argument("--alpha-length", type=int)
        if name == "build":
            p.add_argument("--emit", help="write the new presentation JSON here")

    wd = group("word", "word problem via Dehn's algorithm")
    for name, func in (("trivial", cmd_word_trivial), ("equal", cmd_word_equal)):
        p = leaf(wd, name, func, f"decide {name}")
        p.add_argument("--word", required=True)
        p.add_argument("--word2", required=(name == "equal"))
        p.add_argument("--trace", action="store_true", help="print a transcript to stderr and add the steps")

    pr = group("profile", "contraction profiles")
    p = leaf(pr, "intersection", cmd_profile_intersection, "L(r) per relator")
    p.add_argument("--w", required=True)
    p.add_argument("--csv")
    p = leaf(pr, "fit", cmd_profile_fit, "growth summary of a profile")
    p.add_argument("--w")
    p.add_argument("--profile", help="report or profile JSON from 'profile intersection'")

    bl = group("ball", "Cayley balls")
    p = leaf(bl, "build", cmd_ball_build, "build a ball")
    p.add_argument("--radius", type=int, required=True)
    p.add_argument("--dot", help="also write the ball as DOT")
    p = leaf(bl, "geodesic-check", cmd_ball_geodesic, "check d(1, w^n) = n|w|")
    p.add_argument("--w", required=True)
    p.add_argument("--n-max", type=int, required=True)

    ex = group("export", "graph exports")
    p = leaf(ex, "dot", cmd_export_dot, "DOT of a ball or of supergroup D-cycles")
    p.add_argument("--what", choices=("ball", "supergroup"), required=True)
    p.add_argument("--radius", type=int)
    p.add_argument("--w")
    p.add_argument("--window-factor", type=int, default=6)
    p.add_argument("--alpha-length", type=int)
    p.add_argument("--limit", type=int, help="export at most this many D-cycles")
    return top


def config_argv(path: str) -> list[str]:
    """Translate a JSON config into argv tokens."""
    try:
        data = json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise UsageError(f"config file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed config {path}: {exc}") from None
    if not isinstance(data, dict) or "command" not in data:
        raise UsageError("config must be an object with a 'command' entry")
    cmd = data.pop("command")
    argv = cmd.split() if isinstance(cmd, str) else [str(x) for x in cmd]
    for key, val in data.items():
        flag = "--" + key.replace("_", "-")
        if key == "lambda":
            flag = "--lambda"
        if val is None or val is False:
            continue
        if val is True:
            argv.append(flag)
        elif isinstance(val, list):
            argv += [flag, ",".join(str(x) for x in val)]
        elif isinstance(val, dict):
            argv += [flag, json.dumps(val, sort_keys=True)]
        else:
            argv += [flag, str(val)]
    return argv


def _resolve(argv: list[str]) -> list[str]:
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, rest = pre.parse_known_args(argv)
    if known.config is None:
        return argv
    base = config_argv(known.config)
    cmd = []
    while len(cmd) < len(base) and not base[len(cmd)].startswith("-"):
        cmd.append(base[len(cmd)])
    given = []
    while len(given) < len(rest) and not rest[len(given)].startswith("-"):
        given.append(rest[len(given)])
    if given and given != cmd:
        raise UsageError(f"command {' '.join(given)!r} conflicts with the config's {' '.join(cmd)!r}")
    # flags given on the command line override the config file
    return base + rest[len(given):]


_HIDDEN = {"func", "config", "out"}


def _config_record(args) -> dict:
    out = {}
    for k, v in sorted(vars(args).items()):
        if k in _HIDDEN:
            continue
        if isinstance(v, Fraction):
            v = str(v)
        out[k] = v
    return out


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def run(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(_resolve(argv))
    except UsageError as exc:
        sys.stderr.write(f"scg: error: {exc}\n")
        return EXIT_USAGE
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        result = args.func(args)
    except (UsageError, FamilyError, PresentationError, WordSyntaxError, UnknownSymbolError, BallError, NotCertified, SupergroupError, ValueError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, UnknownSymbolError) and exc.args else exc
        kind = type(exc).__name__
        if isinstance(exc, UnknownSymbolError):
            msg = f"unknown symbol {msg!r}"
        sys.stderr.write(f"scg: error ({kind}): {msg}\n")
        return EXIT_USAGE
    failure = None
    if isinstance(result, tuple):
        result, failure = result
    if isinstance(result, str):
        _emit(result, args.out)
    else:
        report = {"tool": "scg", "version": __version__, "config": _config_record(args), "result": result}
        _emit(_dumps(report), args.out)
    if failure:
        sys.stderr.write(f"scg: check failed: {failure}\n")
        return EXIT_CHECK
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
