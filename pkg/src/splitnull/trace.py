"""CSV convergence traces.

One row per iteration.  Vector cells join their components with
semicolons; every float is written with 17 significant digits so the text
round-trips to the exact binary value and repeated runs produce
byte-identical files.
"""

from __future__ import annotations

TRACE_HEADER = "n,x,u,z,w,y,step_norm,split_residual,fix_residual,phi_x1,cond2_ratio"


def format_value(v: float) -> str:
    return format(float(v), ".17g")


def format_vector(arr) -> str:
    return ";".join(format_value(c) for c in arr)


def trace_row(state) -> str:
    return ",".join(
        [
            str(state.n),
            format_vector(state.x),
            format_vector(state.u),
            format_vector(state.z),
            format_vector(state.w),
            format_vector(state.y),
            format_value(state.step_norm),
            format_value(state.split_residual),
            format_value(state.fix_residual),
            format_value(state.phi_start),
            format_value(state.cond_ratio),
        ]
    )


def write_trace(path, states) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(TRACE_HEADER + "\n")
        for st in states:
            fh.write(trace_row(st) + "\n")
