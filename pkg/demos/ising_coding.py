"""
Information flow in the Ising channel
=====================================

Compare an i.i.d. uniform input with a feedback coding policy.  The
policy sends most of its information off the diagonal: a symbol is
often decoded only once the next output arrives.
"""
from pathlib import Path

import numpy as np

from infomat import IsingPolicy, estimate_plugin_discrete
from infomat.generators import ising_sample
from infomat.measures import directed_information, instantaneous, to_bits
from infomat.render import RenderSpec, render_pgm, render_svg

root = Path(__file__).resolve().parents[1]
out = Path(__file__).with_name("out")
out.mkdir(exist_ok=True)
m = 10

policies = {
    "iid": IsingPolicy.iid_uniform(),
    "feedback_fsm": IsingPolicy.from_json(root / "policies" / "ising_feedback_fsm.json"),
}
for name, policy in policies.items():
    ds = ising_sample(policy, 100_000, m, seed=0)
    mat = estimate_plugin_discrete(ds, truncation=(2, 2))
    diag = instantaneous(mat)
    print(f"{name:13s} DI/m = {to_bits(directed_information(mat)) / m:.3f} bits, "
          f"diagonal {diag:.3f} nats, off-diagonal {mat.entries.sum() - diag:.3f} nats")
    render_svg(mat, RenderSpec(value_clip=0.6), out / f"ising_{name}.svg", title=name)
    render_pgm(mat, RenderSpec(value_clip=0.6), out / f"ising_{name}.pgm")
