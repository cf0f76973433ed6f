import math
from dataclasses import dataclass

from scipy import constants

from fisica.erros import ErroParametro


@dataclass(frozen=True)
class ConstantesFisicas:
    """Constantes físicas em unidades SI (CODATA, via scipy.constants)"""
    hbar: float = constants.hbar
    carga_elementar: float = constants.e
    boltzmann: float = constants.k
    permissividade_vacuo: float = constants.epsilon_0
    quantum_fluxo: float = constants.physical_constants['mag. flux quantum'][0]

    def __post_init__(self):
        for nome in ('hbar', 'carga_elementar', 'boltzmann', 'permissividade_vacuo', 'quantum_fluxo'):
            if not getattr(self, nome) > 0:
                raise ErroParametro(f"Constante {nome} deve ser positiva")

    @property
    def planck(self):
        return 2 * math.pi * self.hbar

    def hz_para_rad(self, frequencia_hz):
        """Converte frequência (Hz) ou energia/h para frequência angular (rad/s)"""
        return 2 * math.pi * frequencia_hz

    def rad_para_hz(self, omega):
        return omega / (2 * math.pi)

    def phi0_para_rad(self, fluxo_phi0):
        """Fluxo externo em unidades de Φ0 para fase φ_ext = 2πΦ/Φ0"""
        return 2 * math.pi * fluxo_phi0


CONSTANTES = ConstantesFisicas()
