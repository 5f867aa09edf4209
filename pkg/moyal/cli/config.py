import json
import logging
import os

from ..errors import ParseError

logger = logging.getLogger(__name__)

DEFAULTS_ENV_VAR = 'MOYAL_DEFAULTS'
SUBCOMMANDS = ('star', 'basis', 'analyze', 'norms', 'verify', 'bench')
BACKENDS = ('grid', 'matrix', 'poly')

_tolerances = {
    'matrix-units-grid': 1e-6,
    'matrix-units-matrix': 1e-14,
    'orthonormality': 1e-8,
    'gaussian-integral': 1e-10,
    'eigenrelations-grid': 1e-4,
    'fourier-eigenbasis': 1e-7,
    'tracial-integral': 1e-7,
    'tracial-cyclic': 1e-10,
    'banach': 1e-12,
    'backend-agreement': 1e-5,
    'hs-sum': 1e-2,
    'basis-change': 1e-8,
    'howe': 1e-14,
    'fourier-cross-grid': 1e-6,
    'twisted-translation': 1e-6,
    'round-trip': 1e-8,
}

class JobSpec:
    """Everything one invocation needs: subcommand, backend, numerical parameters

    Parameters resolve as profile < JSON file named by $MOYAL_DEFAULTS < explicit
    overrides (the command-line flags that were actually given).
    """
    profile_quick = {
        'L': 8.0,
        'M': 64,
        'M_b': 8,
        'L_wide': 12.0,
        'M_wide': 128,
        'L_ortho': 10.0,
        'L_units': 8.0,
        'max_index': 2,
        'seed': 0,
        'tolerances': _tolerances,
    }
    profile_desk = {
        'L': 8.0,
        'M': 256,
        'M_b': 16,
        'L_wide': 12.0,
        'M_wide': 256,
        'L_ortho': 10.0,
        'L_units': 10.0,
        'max_index': 6,
        'seed': 0,
        'tolerances': _tolerances,
    }
    profile_fine = {
        'L': 10.0,
        'M': 512,
        'M_b': 32,
        'L_wide': 14.0,
        'M_wide': 512,
        'L_ortho': 10.0,
        'L_units': 12.0,
        'max_index': 6,
        'seed': 0,
        'tolerances': _tolerances,
    }
    profiles = {'quick': profile_quick, 'desk': profile_desk, 'fine': profile_fine}
    _default_profile = profile_desk

    def __init__(self,
                 subcommand: str,
                 backend: str = 'grid',
                 inputs: tuple = (),
                 outputs: dict = None,
                 profile: str = None,
                 overrides: dict = None,
                 tolerance_scale: float = 1.0,
                 environ=None):
        assert subcommand in SUBCOMMANDS, f'Unknown subcommand {subcommand!r}'
        if backend not in BACKENDS:
            raise ParseError(f'Unknown backend {backend!r}; expected one of {BACKENDS}')
        self.subcommand = subcommand
        self.backend = backend
        self.inputs = tuple(inputs)
        self.outputs = dict(outputs or {})
        self.tolerance_scale = tolerance_scale

        params = self._default_profile if profile is None else self.profiles[profile]
        params = dict(params)
        params['tolerances'] = dict(params['tolerances'])
        environ = os.environ if environ is None else environ
        if environ.get(DEFAULTS_ENV_VAR):
            self._merge(params, self._load_defaults(environ[DEFAULTS_ENV_VAR]))
        self._merge(params, {k: v for k, v in (overrides or {}).items() if v is not None})
        self._validate(params)
        self.params = params
        if tolerance_scale <= 0:
            raise ParseError(f'Tolerance scale must be positive (got {tolerance_scale})')

    @staticmethod
    def _load_defaults(filename) -> dict:
        try:
            with open(filename, 'r') as file:
                defaults = json.load(file)
        except IOError as e:
            logger.error(f'Defaults file not found: {filename}')
            raise e
        except json.JSONDecodeError as e:
            raise ParseError(f'Defaults file {filename} is not valid JSON ({e})') from e
        if not isinstance(defaults, dict):
            raise ParseError(f'Defaults file {filename} must hold a JSON object')
        return defaults

    def _merge(self, params: dict, updates: dict):
        unknown = sorted(set(updates) - set(params))
        if unknown:
            raise ParseError(f'Unknown parameters: {", ".join(unknown)}')
        for key, value in updates.items():
            if key == 'tolerances':
                if not isinstance(value, dict):
                    raise ParseError(f'tolerances must map check names to numbers')
                bad = sorted(set(value) - set(params['tolerances']))
                if bad:
                    raise ParseError(f'Unknown tolerances: {", ".join(bad)}')
                params['tolerances'].update(value)
            else:
                try:
                    params[key] = type(params[key])(value)
                except (TypeError, ValueError) as e:
                    raise ParseError(f'Bad value {value!r} for {key}') from e

    @staticmethod
    def _validate(params: dict):
        for key in ('L', 'L_wide', 'L_ortho', 'L_units'):
            if params[key] <= 0:
                raise ParseError(f'{key} must be positive (got {params[key]})')
        for key in ('M', 'M_wide'):
            M = params[key]
            if M < 2 or M & (M - 1):
                raise ParseError(f'{key} must be a power of two (got {M})')
        if params['M_b'] < 1:
            raise ParseError(f'M_b must be at least 1 (got {params["M_b"]})')
        if params['max_index'] < 0:
            raise ParseError(f'max_index must be non-negative (got {params["max_index"]})')

    def __getattr__(self, name):
        # numerical parameters read as attributes: job.L, job.M, job.M_b, ...
        params = self.__dict__.get('params', {})
        if name in params:
            return params[name]
        raise AttributeError(name)

    def tolerance(self, name: str) -> float:
        return self.params['tolerances'][name] * self.tolerance_scale

    def report_header(self) -> dict:
        return {'backend': self.backend, 'L': self.L, 'M': self.M, 'M_b': self.M_b}
