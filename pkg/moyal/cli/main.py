"""moyal: twisted products on grids, coefficient matrices and polynomials

Operand grammar for --a/--b/--emit (files ending in .csv or .bin are loaded instead):

    f[m,n]  q  p  H  a  abar  gauss(s)  3  0.5  2i  + - * / ^ ( )

e.g. `3*q^2*p - 2i*H + a*abar`, `f[0,1] + 2*q*f[1,1]`, `gauss(2)*q`.
"""
import json
import logging
import re
import sys

import numpy as np

from .. import utils
from ..basis import BasisIndex, BasisSpec, analyze, basis_fn, synthesize
from ..errors import (BackendMismatchError, GridMismatchError, OrderMismatchError, ParseError)
from ..phasegrid import (GridFunction, PhaseGrid, boundary_mass, integrate, sup_distance)
from ..seqspace import CoeffMatrix, StWeights, howe_factorize, rk_norm, st_norm
from ..symbolic import format_poly, parse_expression
from . import bench, verify
from .config import BACKENDS, JobSpec
from .operands import (grid_samples, load_function, resolve_operand, star_grid, star_matrix,
                       star_poly)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_PARSE = 2
EXIT_BACKEND = 3
EXIT_IO = 4

_BASIS_TEXT = re.compile(r'^\s*f\s*\[\s*(\d+)\s*,\s*(\d+)\s*\]\s*$')

def _add_numerics(parser):
    parser.add_argument('--L', type=float, default=None, help='Grid half-width')
    parser.add_argument('--M', type=int, default=None, help='Grid nodes per axis (power of two)')
    parser.add_argument('--M_b', type=int, default=None, help='Basis truncation order')
    parser.add_argument('--profile', choices=sorted(JobSpec.profiles), default=None,
                        help='Parameter profile (default: desk)')

def get_parser():
    parser = utils.get_parser(prog='moyal', description=__doc__)
    parser.add_argument('-v', '--verbose', action='count', default=0,
                        help='-v for INFO, -vv for DEBUG')
    commands = parser.add_subparsers(dest='command', required=True)

    star = commands.add_parser('star', help='Twisted product of two operands')
    star.add_argument('--a', required=True, help='Left operand (expression or file)')
    star.add_argument('--b', required=True, help='Right operand (expression or file)')
    star.add_argument('--backend', choices=BACKENDS, default='grid')
    star.add_argument('--path', choices=('switch', 'switch_right', 'direct'), default='switch',
                      help='Grid quadrature path')
    star.add_argument('--out', default=None, help='Result file (CSV, or .bin with --binary)')
    star.add_argument('--binary', action='store_true', help='Write grid results in binary')
    star.add_argument('--report', default=None, help='JSON report file (default: stdout)')
    star.add_argument('--heatmap', default=None, help='PPM image of |result|')
    star.add_argument('--heatmap-size', type=int, nargs=2, default=None, metavar=('H', 'W'))
    _add_numerics(star)

    basis = commands.add_parser('basis', help='Sample a basis function or expression on the grid')
    basis.add_argument('--emit', required=True, help='e.g. f[2,3]')
    basis.add_argument('--out', required=True)
    basis.add_argument('--binary', action='store_true')
    basis.add_argument('--heatmap', default=None)
    basis.add_argument('--heatmap-size', type=int, nargs=2, default=None, metavar=('H', 'W'))
    _add_numerics(basis)

    analyze_cmd = commands.add_parser('analyze', help='Grid function -> basis coefficients')
    analyze_cmd.add_argument('--in', dest='input', required=True)
    analyze_cmd.add_argument('--out', required=True)
    analyze_cmd.add_argument('--expect', default=None, help='m,n of the expected basis element')
    _add_numerics(analyze_cmd)

    norms = commands.add_parser('norms', help='Weighted norms of a coefficient matrix')
    norms.add_argument('--in', dest='input', required=True)
    norms.add_argument('--weights', action='append', default=[], help='s,t (repeatable)')
    norms.add_argument('--rk', type=int, action='append', default=[], help='k (repeatable)')
    _add_numerics(norms)

    verify_cmd = commands.add_parser('verify', help='Run the identity checks')
    verify_cmd.add_argument('--only', nargs='+', default=None, choices=sorted(verify.CHECKS),
                            metavar='CHECK')
    verify_cmd.add_argument('--max-index', type=int, default=None)
    verify_cmd.add_argument('--tolerance-scale', type=float, default=1.0)
    verify_cmd.add_argument('--seed', type=int, default=None)
    verify_cmd.add_argument('--report', default=None, help='JSON report file')
    _add_numerics(verify_cmd)

    bench_cmd = commands.add_parser('bench', help='Timing sweep of the grid and matrix backends')
    bench_cmd.add_argument('--sweep', choices=('M', 'M_b'), default='M')
    bench_cmd.add_argument('--values', type=int, nargs='+', default=None)
    bench_cmd.add_argument('--repeat', type=int, default=3)
    bench_cmd.add_argument('--out', required=True, help='CSV timing table')
    _add_numerics(bench_cmd)
    return parser

def _job(args, **kwargs) -> JobSpec:
    overrides = {'L': args.L, 'M': args.M, 'M_b': args.M_b}
    overrides.update(kwargs.pop('overrides', {}))
    return JobSpec(args.command, profile=args.profile, overrides=overrides, **kwargs)

def _grid(job: JobSpec) -> PhaseGrid:
    return PhaseGrid(L=job.L, M=job.M)

def _dump(report: dict, filename=None, stream=None):
    text = json.dumps(report, indent=2, sort_keys=True)
    if filename is None:
        print(text, file=stream)
    else:
        with open(filename, 'w') as file:
            file.write(text + '\n')

def _save_grid(f: GridFunction, filename, binary: bool):
    if binary:
        f.save_binary(filename)
    else:
        f.save_csv(filename)

# ------------------------------------------------------------
# Subcommands
# ------------------------------------------------------------

def run_star(job: JobSpec, args) -> int:
    a, b = (resolve_operand(text) for text in job.inputs)
    grid_operands = [x.value.grid for x in (a, b) if x.kind == 'grid']
    if grid_operands:
        grid = grid_operands[0]
        job.params.update(L=grid.L, M=grid.M)
    grid = _grid(job)
    report = job.report_header()
    logger.info(f'star: {a.kind} x {b.kind} on the {job.backend} backend')

    if job.backend == 'poly':
        result = star_poly(a, b)
        text = format_poly(result)
        report['result'] = text
        report['residuals'] = {'terms': len(result.terms())}
        if job.outputs.get('out'):
            with open(job.outputs['out'], 'w') as file:
                file.write(text + '\n')
        else:
            print(text)
        samples = result.sample(grid) if job.outputs.get('heatmap') else None

    elif job.backend == 'matrix':
        result = star_matrix(a, b, job.M_b, grid)
        report['order'] = result.order
        report['residuals'] = {'edge_mass': result.edge_mass()}
        if job.outputs.get('out'):
            result.save_csv(job.outputs['out'])
        samples = synthesize(result, grid) if job.outputs.get('heatmap') else None

    else:
        result = star_grid(a, b, grid, job.M_b, args.path)
        residuals = {'boundary_mass': boundary_mass(result)}
        if a.kind != 'poly' and b.kind != 'poly':
            other = 'switch_right' if args.path != 'switch_right' else 'switch'
            check = star_grid(a, b, grid, job.M_b, other)
            residuals['sup_residual'] = sup_distance(result, check)
            fa, fb = grid_samples(a, grid, job.M_b), grid_samples(b, grid, job.M_b)
            residuals['tracial_residual'] = abs(integrate(result) - integrate(fa * fb))
        report['residuals'] = residuals
        if job.outputs.get('out'):
            _save_grid(result, job.outputs['out'], args.binary)
        samples = result

    if job.outputs.get('heatmap'):
        report['heatmap_max'] = utils.write_heatmap(samples, job.outputs['heatmap'],
                                                    args.heatmap_size)
    if job.outputs.get('out'):
        report['output'] = str(job.outputs['out'])
    if job.backend == 'poly' and not (job.outputs.get('out') or job.outputs.get('report')):
        # stdout already carries the product
        _dump(report, stream=sys.stderr)
    else:
        _dump(report, job.outputs.get('report'))
    return EXIT_OK

def run_basis(job: JobSpec, args) -> int:
    grid = _grid(job)
    match = _BASIS_TEXT.match(args.emit)
    if match:
        f = basis_fn(BasisIndex(int(match.group(1)), int(match.group(2))), grid)
    else:
        f = parse_expression(args.emit).sample(grid)
    _save_grid(f, args.out, args.binary)
    report = {'L': grid.L, 'M': grid.M, 'emit': args.emit, 'output': args.out,
              'boundary_mass': boundary_mass(f)}
    if args.heatmap:
        report['heatmap_max'] = utils.write_heatmap(f, args.heatmap, args.heatmap_size)
    _dump(report)
    return EXIT_OK

def run_analyze(job: JobSpec, args) -> int:
    f = load_function(args.input)
    if not isinstance(f, GridFunction):
        raise BackendMismatchError(f'{args.input} holds coefficients, not grid samples')
    expect = utils.parse_index_pair(args.expect) if args.expect else None
    if expect and max(expect) >= job.M_b:
        raise OrderMismatchError(
            f'--expect {args.expect} lies outside the {job.M_b}x{job.M_b} coefficients')
    c = analyze(f, BasisSpec(job.M_b, f.grid))
    c = CoeffMatrix(c.entries, description=f'analyze({args.input})')
    c.save_csv(args.out)
    report = {'L': f.grid.L, 'M': f.grid.M, 'M_b': job.M_b, 'output': args.out,
              'edge_mass': c.edge_mass()}
    if expect:
        m, n = expect
        off_target = np.abs(c.entries).copy()
        off_target[m, n] = 0
        report['expect'] = [m, n]
        report['target'] = [float(c[m, n].real), float(c[m, n].imag)]
        report['off_target'] = float(off_target.max())
    _dump(report)
    return EXIT_OK

def run_norms(job: JobSpec, args) -> int:
    c = load_function(args.input)
    if not isinstance(c, CoeffMatrix):
        raise BackendMismatchError(f'{args.input} holds grid samples, not coefficients')
    report = {'order': c.order, 'st': {}, 'rk': {}}
    for text in args.weights:
        s, t = utils.parse_weight_pair(text)
        report['st'][text] = st_norm(c, StWeights(s, t))
    for k in args.rk:
        report['rk'][str(k)] = rk_norm(c, k)
    b, d = howe_factorize(c)
    diagonal = np.diag(d.entries).real
    report['howe'] = {
        'd': diagonal.tolist(),
        'nonincreasing': bool(np.all(np.diff(diagonal) <= 0)),
        'residual': float(np.abs(b.entries @ d.entries - c.entries).max()),
    }
    _dump(report)
    return EXIT_OK

def run_verify(job: JobSpec, args) -> int:
    results = verify.run_checks(job, only=args.only)
    table = verify.to_frame(results)
    print(table.to_string(index=False))
    if args.report:
        _dump({'checks': [r.to_dict() for r in results], **job.report_header()}, args.report)
    return EXIT_OK if all(r.passed for r in results) else EXIT_CHECK_FAILED

def run_bench(job: JobSpec, args) -> int:
    table = bench.sweep(job, args.sweep, args.values, repeat=args.repeat)
    table.to_csv(args.out, index=False)
    print(table.to_string(index=False))
    return EXIT_OK

COMMANDS = {
    'star': run_star,
    'basis': run_basis,
    'analyze': run_analyze,
    'norms': run_norms,
    'verify': run_verify,
    'bench': run_bench,
}

def build_job(args) -> JobSpec:
    if args.command == 'star':
        outputs = {'out': args.out, 'report': args.report, 'heatmap': args.heatmap}
        return _job(args, backend=args.backend, inputs=(args.a, args.b), outputs=outputs)
    if args.command == 'verify':
        return _job(args, overrides={'max_index': args.max_index, 'seed': args.seed},
                    tolerance_scale=args.tolerance_scale)
    return _job(args)

def main(argv=None) -> int:
    args = get_parser().parse_args(argv)
    level = [logging.WARNING, logging.INFO, logging.DEBUG][min(args.verbose, 2)]
    logging.basicConfig(level=level, format='%(levelname)s %(name)s: %(message)s')
    logging.captureWarnings(True)
    try:
        job = build_job(args)
        return COMMANDS[args.command](job, args)
    except ParseError as e:
        logger.error(str(e))
        return EXIT_PARSE
    except (BackendMismatchError, GridMismatchError, OrderMismatchError) as e:
        logger.error(str(e))
        return EXIT_BACKEND
    except OSError as e:
        logger.error(str(e))
        return EXIT_IO

if __name__ == '__main__':
    sys.exit(main())
