"""Estimativas da membrana eletromecânica: x_zpf, pull-in, modulação de carga e figuras de acoplamento."""
import logging
import math
from dataclasses import dataclass

from scipy.optimize import brentq, minimize_scalar

from fisica.constantes import CONSTANTES
from fisica.erros import ErroEstabilidade, ErroParametro

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ParametrosMembrana:
    """Parâmetros SI da membrana; x_zpf opcional (valor tabelado)"""
    lado: float
    tensao_mecanica: float
    Omega_m_Hz: float
    massa: float
    densidade: float
    gap: float
    area: float
    capacitancia: float
    V_g: float
    x_zpf: float = None

    def __post_init__(self):
        for nome in ('lado', 'tensao_mecanica', 'Omega_m_Hz', 'massa', 'densidade', 'gap', 'area',
                     'capacitancia'):
            if not getattr(self, nome) > 0:
                raise ErroParametro(f"{nome} deve ser positivo")
        if self.V_g < 0:
            raise ErroParametro("V_g não pode ser negativo")
        if self.x_zpf is not None and not self.x_zpf > 0:
            raise ErroParametro("x_zpf deve ser positivo")
        placas = self.capacitancia_placas
        if abs(self.capacitancia - placas) > 0.3 * placas:
            logger.warning("Capacitância %.3g F difere de ε0·S/h = %.3g F em mais de 30%%",
                           self.capacitancia, placas)

    @property
    def Omega_m(self):
        return CONSTANTES.hz_para_rad(self.Omega_m_Hz)

    @property
    def capacitancia_placas(self):
        return CONSTANTES.permissividade_vacuo * self.area / self.gap

    @property
    def rigidez(self):
        return self.massa * self.Omega_m ** 2


def movimento_ponto_zero(massa, Omega_m):
    """x_zpf = √(ℏ/(2mΩ_m)), Ω_m em rad/s"""
    if not (massa > 0 and Omega_m > 0):
        raise ErroParametro("Massa e frequência devem ser positivas")
    return math.sqrt(CONSTANTES.hbar / (2 * massa * Omega_m))


def massa_de_movimento_ponto_zero(x_zpf, Omega_m):
    return CONSTANTES.hbar / (2 * Omega_m * x_zpf ** 2)


def comparar_x_zpf(p):
    """x_zpf calculado, tabelado e a razão entre eles"""
    calculado = movimento_ponto_zero(p.massa, p.Omega_m)
    return {
        'x_zpf_calculado_m': calculado,
        'x_zpf_tabelado_m': p.x_zpf,
        'razao_tabelado_calculado': None if p.x_zpf is None else p.x_zpf / calculado,
    }


def forca(z, V, p):
    """F(z) = −mΩ²(z − h) − V²ε0S/(2z²)"""
    return (-p.rigidez * (z - p.gap)
            - V ** 2 * CONSTANTES.permissividade_vacuo * p.area / (2 * z ** 2))


def equilibrio_estavel(V, p):
    """Posição do equilíbrio estável em tensão V, ou None quando não existe"""
    if V == 0:
        return p.gap

    def negativo(u):
        return -forca(u * p.gap, V, p)

    maximo = minimize_scalar(negativo, bounds=(1e-3, 1.0), method='bounded',
                             options={'xatol': 1e-12})
    u_max = maximo.x
    if forca(u_max * p.gap, V, p) < 0:
        return None
    u = brentq(lambda x: forca(x * p.gap, V, p), u_max, 1.0, xtol=1e-14)
    z = u * p.gap
    derivada = (forca(z * (1 + 1e-7), V, p) - forca(z * (1 - 1e-7), V, p)) / (2e-7 * z)
    return z if derivada < 0 else None


def tensao_pull_in(p, rtol=1e-8):
    """Limite analítico V_max = √(mΩ²h³/(ε0S)) e o pull-in numérico por bissecção"""
    if equilibrio_estavel(0.0, p) is None:
        raise ErroParametro("Sem equilíbrio estável com V = 0")
    V_max = math.sqrt(p.rigidez * p.gap ** 3 / (CONSTANTES.permissividade_vacuo * p.area))
    baixo, alto = 0.0, V_max
    while equilibrio_estavel(alto, p) is not None:
        baixo, alto = alto, 2 * alto
    while alto - baixo > rtol * alto:
        meio = (baixo + alto) / 2
        if equilibrio_estavel(meio, p) is None:
            alto = meio
        else:
            baixo = meio
    return {'V_max_analitico': V_max, 'V_pull_in_numerico': (baixo + alto) / 2}


def modulacao_carga(p, usar_tabelado=True):
    """N_drive = (V_g/2e)·x_zpf·C/h"""
    if p.V_g > 0:
        pull_in = tensao_pull_in(p)['V_pull_in_numerico']
        if p.V_g >= pull_in:
            raise ErroEstabilidade(f"V_g = {p.V_g} V acima do pull-in ({pull_in:.3f} V)")
    x_zpf = p.x_zpf if (usar_tabelado and p.x_zpf is not None) else movimento_ponto_zero(p.massa, p.Omega_m)
    return p.V_g / (2 * CONSTANTES.carga_elementar) * x_zpf * p.capacitancia / p.gap


def derivadas_capacitancia(p):
    """dC/dx aproximado (C/h) e exato de placas paralelas (ε0S/h²)"""
    return {
        'dC_dx_aproximado_F_m': p.capacitancia / p.gap,
        'dC_dx_placas_F_m': CONSTANTES.permissividade_vacuo * p.area / p.gap ** 2,
    }


@dataclass
class RelatorioAcoplamento:
    N_drive: float
    Omega_r: float              # rad/s
    N_min: float
    acoplamento_forte: bool
    sensibilidade_energia: float  # em unidades de ℏ


def modulacao_minima(omega_ge, phi_eg, T1):
    """N_min = 2π/(|φ_eg| ω_ge T1)"""
    return 2 * math.pi / (abs(phi_eg) * omega_ge * T1)


def sensibilidade_energia(delta_q, capacitancia):
    """δq²/(2C) em unidades de ℏ, com δq em e/√Hz"""
    carga = delta_q * CONSTANTES.carga_elementar
    return carga ** 2 / (2 * capacitancia) / CONSTANTES.hbar


def figuras_acoplamento(N_drive, omega_ge, phi_eg, T1, capacitancia, delta_q):
    """Ω_r, N_min, regime de acoplamento forte e sensibilidade em energia"""
    if not (omega_ge > 0 and T1 > 0 and capacitancia > 0):
        raise ErroParametro("omega_ge, T1 e capacitância devem ser positivos")
    Omega_r = 2 * N_drive * omega_ge * abs(phi_eg)
    return RelatorioAcoplamento(
        N_drive=N_drive,
        Omega_r=Omega_r,
        N_min=modulacao_minima(omega_ge, phi_eg, T1),
        acoplamento_forte=Omega_r * T1 > 2 * math.pi,
        sensibilidade_energia=sensibilidade_energia(delta_q, capacitancia),
    )
