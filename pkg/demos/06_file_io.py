"""Reading and writing graphs: edge lists and GML, then selecting on disk data."""

import tempfile
from pathlib import Path

import netcv

spec, _ = netcv.make_scenario("sbm-3", 300, seed=0)
a = netcv.sample_adjacency(netcv.build_prob(spec), seed=1)

with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "net.edgelist"
    netcv.write_edgelist(path, a)
    loaded, attrs = netcv.load_graph(path)
    print("round trip: n =", loaded.n,
          " edges =", loaded.adj.sum() // 2,
          " ids preserved:", attrs["ids"][:5], "...")

    gml = Path(tmp) / "toy.gml"
    gml.write_text(
        "graph [\n"
        "  node [ id 0 label \"a\" ]\n"
        "  node [ id 1 label \"b\" ]\n"
        "  node [ id 2 label \"c\" ]\n"
        "  edge [ source 0 target 1 ]\n"
        "  edge [ source 1 target 2 ]\n"
        "]\n"
    )
    g, attrs = netcv.load_graph(gml, format="gml")
    print("gml: n =", g.n, " labels =", attrs["labels"])

    # the same pipeline runs on any loaded graph
    result = netcv.class_selection(
        loaded, "sbm-vs-dcbm",
        netcv.CvConfig(scheme="vfold", v=10, seed=3),
        netcv.PenaltyConfig(),
    )
    print("selection on the loaded graph:", result.chosen.label())
