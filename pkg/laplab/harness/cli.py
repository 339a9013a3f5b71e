import argparse
import logging
import sys
from itertools import combinations
from typing import List, Optional

from laplab.estimators import run_estimator
from laplab.exceptions import LapLabError
from laplab.graph import induced_edges, marginal_clique_system, relative_path_connected, strong_lap_satisfied
from laplab.model import (
    DEFAULT_BURN_IN,
    DEFAULT_ENUMERATION_CAP,
    DEFAULT_THINNING,
    read_dataset,
    read_model,
    read_structure,
    sample_exact,
    sample_gibbs,
    write_dataset,
    write_estimate,
    write_model,
)
from laplab.optimize import OptConfig
from laplab.util import format_clique, make_stream, parse_node_list

from .config import load_config
from .experiment import run_experiment
from .generators import generate_model
from .report import report_csv, write_metadata

logger = logging.getLogger(__name__)


def _generate(args: argparse.Namespace):
    model = generate_model(args.model, args.seed, args.cards, args.width)
    write_model(args.out, model)


def _sample(args: argparse.Namespace):
    model = read_model(args.model)
    rng = make_stream(args.seed, "data")
    if args.sampler == "gibbs":
        data = sample_gibbs(model, args.n, args.burn_in, args.thinning, rng, args.chains)
    else:
        data = sample_exact(model, args.n, rng, args.enumeration_cap)
    write_dataset(args.out, data)


def _estimate(args: argparse.Namespace):
    structure = read_structure(args.model_structure)
    data = read_dataset(args.data, structure.cards)
    cfg = OptConfig(grad_tol=args.grad_tol, max_iters=args.max_iters)
    result = run_estimator(args.estimator, structure, data, cfg, args.workers, args.enumeration_cap)
    if not result.converged:
        logger.warning("%s did not converge on every block", args.estimator)
    write_estimate(args.out, structure, result.estimate.params)


def _experiment(args: argparse.Namespace):
    cfg = load_config(args.config)
    if args.workers is not None:
        cfg = cfg.model_copy(update={"workers": args.workers})
    rows = run_experiment(cfg)
    report_csv(rows, args.out)
    logger.info("wrote metadata to %s", write_metadata(args.out, cfg))


def _check(args: argparse.Namespace):
    structure = read_structure(args.model)
    domain = parse_node_list(args.domain)
    clique = parse_node_list(args.clique)
    satisfied = strong_lap_satisfied(structure.graph, domain, clique)

    print(f"domain: {format_clique(sorted(domain))}")
    print(f"clique: {format_clique(sorted(clique))}")
    print(f"strong LAP condition: {'satisfied' if satisfied else 'violated'}")
    for i, j in combinations(sorted(clique), 2):
        connected = relative_path_connected(structure.graph, domain, i, j)
        print(f"path connected {i}-{j} outside the domain: {'yes' if connected else 'no'}")
    edges = sorted(induced_edges(structure.graph, domain))
    print("induced edges: " + (" ".join(f"{i}-{j}" for i, j in edges) or "none"))
    cliques = marginal_clique_system(structure.graph, structure.cliques, domain)
    print("marginal clique system: " + " ".join(format_clique(c, "-") for c in cliques))


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="laplab", description="Local estimators for discrete Markov random fields")
    parser.add_argument("-v", "--verbose", action="store_true", help="log debug output")
    parser.add_argument("-q", "--quiet", action="store_true", help="log warnings and errors only")
    commands = parser.add_subparsers(dest="command", required=True)

    generate = commands.add_parser("generate", help="draw a random model")
    generate.add_argument("--model", required=True, help="grid:RxC, complete:M, bipartite:MxN or file:PATH")
    generate.add_argument("--seed", type=int, default=0)
    generate.add_argument("--cards", type=int, default=2)
    generate.add_argument("--width", type=float, default=1.0)
    generate.add_argument("--out", required=True)
    generate.set_defaults(handler=_generate)

    sample = commands.add_parser("sample", help="sample a dataset from a model file")
    sample.add_argument("--model", required=True)
    sample.add_argument("--n", type=int, required=True)
    sample.add_argument("--seed", type=int, default=0)
    sample.add_argument("--sampler", choices=("exact", "gibbs"), default="exact")
    sample.add_argument("--burn-in", type=int, default=DEFAULT_BURN_IN)
    sample.add_argument("--thinning", type=int, default=DEFAULT_THINNING)
    sample.add_argument("--chains", type=int, default=1)
    sample.add_argument("--enumeration-cap", type=int, default=DEFAULT_ENUMERATION_CAP)
    sample.add_argument("--out", required=True)
    sample.set_defaults(handler=_sample)

    estimate = commands.add_parser("estimate", help="estimate parameters from a dataset")
    estimate.add_argument("--model-structure", required=True)
    estimate.add_argument("--data", required=True)
    estimate.add_argument("--estimator", required=True)
    estimate.add_argument("--grad-tol", type=float, default=OptConfig().grad_tol)
    estimate.add_argument("--max-iters", type=int, default=OptConfig().max_iters)
    estimate.add_argument("--workers", type=int, default=1)
    estimate.add_argument("--enumeration-cap", type=int, default=DEFAULT_ENUMERATION_CAP)
    estimate.add_argument("--out", required=True)
    estimate.set_defaults(handler=_estimate)

    experiment = commands.add_parser("experiment", help="run a configured experiment and write a CSV report")
    experiment.add_argument("--config", required=True)
    experiment.add_argument("--workers", type=int)
    experiment.add_argument("--out", required=True)
    experiment.set_defaults(handler=_experiment)

    check = commands.add_parser("check", help="report the structural conditions of a domain")
    check.add_argument("--model", required=True)
    check.add_argument("--domain", required=True)
    check.add_argument("--clique", required=True)
    check.set_defaults(handler=_check)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = _parser().parse_args(argv)
    level = logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO
    logging.basicConfig(level=level, format="%(asctime)s %(levelname)s %(name)s: %(message)s")

    try:
        args.handler(args)
    except LapLabError as error:
        logger.error("%s", error)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
