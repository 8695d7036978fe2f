"""Command-line interface.

Every subcommand takes an amalgam file and the subgroup generators
(``--gen``, repeatable).  Answers go to stdout; exit status is 0 on
success, 2 for bad input and 3 when separation is not supported for the
amalgam.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .amalgam import Amalgam, AmalgamError
from .decisions import decide, format_index, index_witness, is_free, is_torsion_free
from .finite_groups import DEFAULT_COSET_CAP, CosetCapExceeded
from .graph import LabelledGraph, classify
from .normal_forms import format_normal, normal_form
from .pipeline import build_subgroup_graph, is_member, verify_precover
from .presentation import compute_presentation, tietze_simplify
from .separability import SeparationError, UnsupportedCase, separate
from .words import AmalgamFileError, WordError, format_word, parse_amalgam, parse_word

EXIT_OK, EXIT_INPUT, EXIT_UNSUPPORTED = 0, 2, 3


class Session:
    """A loaded amalgam plus the subgroup graphs built from it."""

    def __init__(self, path, max_cosets=DEFAULT_COSET_CAP):
        with open(path) as fh:
            self.spec = parse_amalgam(fh.read())
        self.amalgam = Amalgam(self.spec, max_cosets)
        self._cache = {}

    def words(self, texts):
        return [parse_word(t, self.spec.alphabet) for t in texts]

    def subgroup(self, texts, trace=False):
        key = (tuple(texts), trace)
        if key not in self._cache:
            self._cache[key] = build_subgroup_graph(self.amalgam, self.words(texts), trace=trace)
        return self._cache[key]


class Output:
    def __init__(self, fmt, stream=None):
        self.fmt = fmt
        self.stream = stream or sys.stdout

    def emit(self, text, **record):
        if self.fmt == "json-lines":
            self.stream.write(json.dumps(record, sort_keys=True) + "\n")
        elif text is not None:
            self.stream.write(text + "\n")


def _dashed(session):
    return session.spec.factor2.generators


def _write(path, text):
    with open(path, "w") as fh:
        fh.write(text)
    return path


def _summary(session, g: LabelledGraph):
    rep = classify(g, session.amalgam.colour)
    return {
        "vertices": g.num_vertices,
        "edges": len(g.edges),
        "vm1": len(rep.vm1),
        "vm2": len(rep.vm2),
        "vb": len(rep.vb),
        "components": len(rep.components),
    }


def cmd_build(session, args, out):
    sg = session.subgroup(args.gen, trace=args.trace)
    os.makedirs(args.out_dir, exist_ok=True)
    base = os.path.join(args.out_dir, args.name)
    files = [_write(base + ".graph", sg.graph.to_text())]
    if args.dot:
        files.append(_write(base + ".dot", sg.graph.to_dot(args.name, _dashed(session))))
    if args.trace:
        for step, g in sg.trace:
            files.append(_write(f"{base}.{step}.dot", g.to_dot(step, _dashed(session))))
    s = _summary(session, sg.graph)
    text = (
        f"|V| = {s['vertices']}, |E| = {s['edges']}, "
        f"monochromatic {s['vm1']} + {s['vm2']}, bichromatic {s['vb']}, components {s['components']}"
    )
    if sg.graph.is_trivial():
        text += " (trivial subgroup)"
    out.emit(text, command="build", files=files, **s)
    return EXIT_OK


def cmd_member(session, args, out):
    sg = session.subgroup(args.gen)
    for text in args.word:
        ans = is_member(sg, session.words([text])[0])
        out.emit("yes" if ans else "no", command="member", word=text, member=ans)
    return EXIT_OK


def cmd_free(session, args, out):
    ans = is_free(session.subgroup(args.gen))
    out.emit("yes" if ans else "no", command="free", free=ans)
    return EXIT_OK


def cmd_torsion_free(session, args, out):
    ans = is_torsion_free(session.subgroup(args.gen))
    out.emit("yes" if ans else "no", command="torsion-free", torsion_free=ans)
    return EXIT_OK


def cmd_index(session, args, out):
    sg = session.subgroup(args.gen)
    w = index_witness(sg)
    value = "infinite" if w is not None else sg.graph.num_vertices
    out.emit(format_index(sg), command="index", index=value, witness=None if w is None else w[0])
    return EXIT_OK


def cmd_present(session, args, out):
    p = compute_presentation(session.subgroup(args.gen))
    if not args.raw:
        p = tietze_simplify(p)
    table = {n: format_word(w) for n, w in p.generators}
    out.emit(
        str(p) + ("\n" + p.table() if p.generators else ""),
        command="present",
        generators=list(p.names),
        relators=[format_word(r) for r in p.relators],
        defining_words=table,
    )
    return EXIT_OK


def cmd_separate(session, args, out):
    sg = session.subgroup(args.gen)
    g = session.words([args.exclude])[0]
    res = separate(sg, g, strategy=args.strategy)
    os.makedirs(args.out_dir, exist_ok=True)
    base = os.path.join(args.out_dir, args.name)
    files = [
        _write(base + ".graph", res.graph.to_text()),
        _write(base + ".dot", res.graph.to_dot(args.name, _dashed(session))),
    ]
    lines = [f"index {res.index}", f"strategy {res.strategy} (alpha = {res.alpha})"]
    lines += [f"[{'ok' if ok else 'FAIL'}] {name}" for name, ok in res.checks.items()]
    out.emit(
        "\n".join(lines),
        command="separate",
        index=res.index,
        strategy=res.strategy,
        alpha=res.alpha,
        checks=res.checks,
        files=files,
    )
    return EXIT_OK


def cmd_export_dot(session, args, out):
    sg = session.subgroup(args.gen)
    out.emit(sg.graph.to_dot(args.name, _dashed(session)).rstrip("\n"), command="export-dot", dot=sg.graph.to_dot(args.name, _dashed(session)))
    return EXIT_OK


def cmd_verify(session, args, out):
    sg = session.subgroup(args.gen)
    ok, problems = verify_precover(sg.graph, session.amalgam)
    checks = {
        "well_labelled": sg.graph.is_well_labelled(),
        "precover": ok,
        "generators_are_members": all(is_member(sg, w) for w in sg.generators),
    }
    lines = [f"[{'ok' if v else 'FAIL'}] {k}" for k, v in checks.items()] + problems
    out.emit("\n".join(lines), command="verify", checks=checks, problems=problems)
    return EXIT_OK if all(checks.values()) else 1


def cmd_info(session, args, out):
    sg = session.subgroup(args.gen)
    rep = decide(sg).as_dict()
    lines = [session.amalgam.summary()]
    lines += [f"{k}: {'yes' if v is True else 'no' if v is False else v}" for k, v in rep.items()]
    forms = {}
    for text in args.word:
        nf = format_normal(session.amalgam, normal_form(session.amalgam, session.words([text])[0]))
        forms[text] = nf
        lines.append(f"normal form of {text}: {nf}")
    out.emit("\n".join(lines), command="info", normal_forms=forms, **rep)
    return EXIT_OK


COMMANDS = {
    "build": cmd_build,
    "member": cmd_member,
    "free": cmd_free,
    "torsion-free": cmd_torsion_free,
    "index": cmd_index,
    "present": cmd_present,
    "separate": cmd_separate,
    "export-dot": cmd_export_dot,
    "verify": cmd_verify,
    "info": cmd_info,
}


def build_parser():
    parser = argparse.ArgumentParser(prog="amalgraph", description="Subgroup graphs of amalgams of finite groups.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("amalgam", help="amalgam description file")
    common.add_argument("--gen", action="append", default=[], metavar="WORD", help="subgroup generator (repeatable)")
    common.add_argument("--format", choices=("text", "json-lines"), default="text")
    common.add_argument("--coset-cap", type=int, default=DEFAULT_COSET_CAP, help="coset enumeration limit per factor")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", parents=[common], help="build the subgroup graph and write it out")
    p.add_argument("--out-dir", default=".")
    p.add_argument("--name", default="subgroup")
    p.add_argument("--dot", action="store_true", help="also write DOT")
    p.add_argument("--trace", action="store_true", help="write a DOT frame after every step")

    p = sub.add_parser("member", parents=[common], help="decide membership")
    p.add_argument("word", nargs="+")

    sub.add_parser("free", parents=[common], help="is the subgroup free?")
    sub.add_parser("torsion-free", parents=[common], help="is the subgroup torsion-free?")
    sub.add_parser("index", parents=[common], help="index of the subgroup")

    p = sub.add_parser("present", parents=[common], help="presentation of the subgroup")
    p.add_argument("--raw", action="store_true", help="skip Tietze simplification")

    p = sub.add_parser("separate", parents=[common], help="finite-index subgroup excluding a word")
    p.add_argument("--exclude", required=True, metavar="WORD")
    p.add_argument("--strategy", default=None, help="force cyclic / central_in_i / malnormal_in_i")
    p.add_argument("--out-dir", default=".")
    p.add_argument("--name", default="cover")

    p = sub.add_parser("export-dot", parents=[common], help="print the subgroup graph as DOT")
    p.add_argument("--name", default="G")

    sub.add_parser("verify", parents=[common], help="check the subgroup graph is a precover")

    p = sub.add_parser("info", parents=[common], help="summary of decisions, optional normal forms")
    p.add_argument("--word", action="append", default=[])
    return parser


def main(argv=None, stdout=None, stderr=None):
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    out = Output(args.format, stdout)
    try:
        session = Session(args.amalgam, args.coset_cap)
        return COMMANDS[args.command](session, args, out)
    except (OSError, AmalgamFileError, WordError, AmalgamError, CosetCapExceeded, SeparationError) as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_INPUT
    except UnsupportedCase as exc:
        stderr.write(f"unsupported: {exc}\n")
        return EXIT_UNSUPPORTED


if __name__ == "__main__":
    sys.exit(main())
