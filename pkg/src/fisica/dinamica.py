"""Dinâmica aberta: cavidade bombeada, resfriamento por sideband, Bloch e Rabi.

Unidades internas: frequências angulares em rad/s, taxas em 1/s, tempos em s.
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
import pandas as pd
from scipy import linalg
from scipy.integrate import solve_ivp
from scipy.optimize import curve_fit

from fisica.circuito import (
    ConfiguracaoBase,
    construir_hamiltoniano,
    construir_operadores,
    diagonalizar_e_rotular,
    elementos_matriz,
    resolver_fluxos,
)
from fisica.constantes import CONSTANTES
from fisica.erros import ErroParametro, ErroRigidez

logger = logging.getLogger(__name__)

# Qubit: índice 0 = |g>, 1 = |e>
SIGMA_MENOS = np.array([[0, 1], [0, 0]], dtype=complex)
SIGMA_MAIS = SIGMA_MENOS.T.copy()
SIGMA_Z = np.diag([-1.0, 1.0]).astype(complex)
PROJETOR_E = np.diag([0.0, 1.0]).astype(complex)


def destruicao(n):
    """Operador de aniquilação truncado em n níveis de Fock"""
    return np.diag(np.sqrt(np.arange(1, n, dtype=float)), k=1).astype(complex)


@dataclass(frozen=True)
class ParametrosCavidade:
    """Modo de leitura: ω_R/2π e κ/2π em Hz, φ_zpf,R adimensional"""
    omega_R_Hz: float
    kappa_Hz: float
    phi_zpf_R: float

    def __post_init__(self):
        if not self.kappa_Hz > 0:
            raise ErroParametro(f"kappa deve ser positivo (recebido {self.kappa_Hz})")
        if not self.omega_R_Hz > 0:
            raise ErroParametro(f"omega_R deve ser positivo (recebido {self.omega_R_Hz})")
        if not self.phi_zpf_R > 0:
            raise ErroParametro("phi_zpf_R deve ser positivo")
        if self.phi_zpf_R > 0.1:
            logger.warning("φ_zpf,R = %.3f acima de 0.1: expansão em primeira ordem duvidosa",
                           self.phi_zpf_R)

    @property
    def kappa(self):
        return CONSTANTES.hz_para_rad(self.kappa_Hz)

    def g(self, E_J_Hz):
        """ℏg = E_J φ_zpf,R², em rad/s"""
        return CONSTANTES.hz_para_rad(E_J_Hz * self.phi_zpf_R ** 2)


@dataclass(frozen=True)
class CavidadeBombeada:
    epsilon_d: complex   # rad/s
    omega_p: float       # rad/s
    omega_R: float       # rad/s

    @property
    def delta_R(self):
        return self.omega_p - self.omega_R

    def dessintonias_sideband(self, omega_ge):
        """(Δ_R + ω_ge, Δ_R − ω_ge)"""
        return self.delta_R + omega_ge, self.delta_R - omega_ge


def alfa_estacionario(cfg, kappa):
    """Amplitude intracavidade que anula os termos lineares em â, â†"""
    if not kappa > 0:
        raise ErroParametro("kappa deve ser positivo")
    return -cfg.epsilon_d / (cfg.delta_R + 0.5j * kappa)


def residuo_deriva(alfa, cfg, kappa):
    """Coeficiente total de â† vindo do amortecimento, da dessintonia e do bombeio"""
    amortecimento = 0.5j * kappa * alfa
    dessintonia = cfg.delta_R * alfa
    return amortecimento + dessintonia + cfg.epsilon_d


@dataclass(frozen=True)
class DissipacaoQubit:
    """Banho térmico com Γ↑ = Γ↓ = Γ (1/s)"""
    Gamma: float
    Gamma_phi: float = None

    def __post_init__(self):
        if self.Gamma < 0:
            raise ErroParametro("Gamma não pode ser negativo")
        if self.Gamma_phi is None:
            object.__setattr__(self, 'Gamma_phi', self.Gamma / 2)
        elif self.Gamma_phi < 0:
            raise ErroParametro("Gamma_phi não pode ser negativo")

    @classmethod
    def de_T1(cls, T1, Gamma_phi=None):
        return cls(Gamma=1 / (2 * T1), Gamma_phi=Gamma_phi)

    @property
    def T1(self):
        return math.inf if self.Gamma == 0 else 1 / (2 * self.Gamma)

    @property
    def T2(self):
        taxa = self.Gamma + self.Gamma_phi
        return math.inf if taxa == 0 else 1 / taxa

    def operadores_perda(self, dimensao_cavidade=None):
        ops = [math.sqrt(self.Gamma) * SIGMA_MAIS, math.sqrt(self.Gamma) * SIGMA_MENOS]
        if dimensao_cavidade:
            ident = np.eye(dimensao_cavidade)
            ops = [np.kron(op, ident) for op in ops]
        return [op for op in ops if self.Gamma > 0]


@dataclass
class RelatorioPerdas:
    """Taxas efetivas dos operadores L± após eliminação adiabática da cavidade"""
    taxa_mais: float    # σ+, prepara |e>
    taxa_menos: float   # σ−, prepara |g>
    epsilon: float
    kappa_domina: bool
    razao_sideband: float
    sideband_resolvido: bool
    acoplamento: float  # g|c_x||α| em rad/s
    kappa: float
    omega_ge: float
    delta_R: float

    @property
    def taxa_total(self):
        return self.taxa_mais + self.taxa_menos


def taxas_perda_efetivas(elementos, g, alfa, kappa, delta_R, omega_ge):
    """Taxas |L±|² (1/s) de resfriamento por sideband

    Args:
        elementos: ElementosMatriz no fluxo de resfriamento (ou |c_x| diretamente)
        g: acoplamento em rad/s
        alfa: amplitude intracavidade
        kappa: taxa de perda da cavidade (1/s)
        delta_R: ω_p − ω_R em rad/s
        omega_ge: frequência do qubit em rad/s
    """
    if not kappa > 0:
        raise ErroParametro("kappa deve ser positivo")
    cx = abs(elementos.cx) if hasattr(elementos, 'cx') else abs(elementos)
    acoplamento = g * cx * abs(alfa)

    def lorentziana(dessintonia):
        return acoplamento ** 2 * kappa / (dessintonia ** 2 + kappa ** 2 / 4)

    epsilon = acoplamento / kappa
    razao = 2 * omega_ge / kappa
    relatorio = RelatorioPerdas(
        taxa_mais=lorentziana(delta_R - omega_ge),
        taxa_menos=lorentziana(delta_R + omega_ge),
        epsilon=epsilon,
        kappa_domina=kappa >= 10 * g * abs(alfa),
        razao_sideband=razao,
        sideband_resolvido=razao >= 5,
        acoplamento=acoplamento,
        kappa=kappa,
        omega_ge=omega_ge,
        delta_R=delta_R,
    )
    if epsilon > 0.1:
        logger.warning("Parâmetro de expansão ε = %.3f acima de 0.1", epsilon)
    return relatorio


def tempo_preparacao(taxa, Gamma):
    """Constante de tempo e fidelidade estacionária do bombeio para o estado alvo"""
    total = taxa + 2 * Gamma
    if total == 0:
        return math.inf, 0.5
    return 1 / total, (taxa + Gamma) / total


def populacao_estacionaria(taxa_mais, taxa_menos, Gamma):
    """⟨σz⟩ estacionário das equações de taxa"""
    total = taxa_mais + taxa_menos + 2 * Gamma
    if total == 0:
        return 0.0
    return (taxa_mais - taxa_menos) / total


@dataclass
class Trajetoria:
    tempos: np.ndarray
    rhos: np.ndarray = field(repr=False)

    def expectativa(self, operador):
        return np.real(np.einsum('ij,tji->t', operador, self.rhos))

    def traco(self):
        return np.real(np.einsum('tii->t', self.rhos))

    def pureza(self):
        return np.real(np.einsum('tij,tji->t', self.rhos, self.rhos))

    def autovalor_minimo(self):
        return np.array([linalg.eigvalsh((r + r.conj().T) / 2)[0] for r in self.rhos])


def _rk4_fixo(f, t_eval, y0, passo):
    saida = [y0]
    y = y0
    for t0, t1 in zip(t_eval[:-1], t_eval[1:]):
        n = max(1, int(math.ceil((t1 - t0) / passo)))
        h = (t1 - t0) / n
        t = t0
        for _ in range(n):
            k1 = f(t, y)
            k2 = f(t + h / 2, y + h / 2 * k1)
            k3 = f(t + h / 2, y + h / 2 * k2)
            k4 = f(t + h, y + h * k3)
            y = y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
            t += h
        saida.append(y)
    return np.array(saida)


def evoluir_lindblad(H, operadores_perda, rho0, t_span, t_eval=None, rtol=1e-8, atol=1e-10,
                     metodo='DOP853', passo_fixo=None):
    """Integra dρ/dt = −i[H,ρ] + Σ D[L]ρ

    H pode ser matriz constante ou função t -> matriz (rad/s).
    """
    rho0 = np.asarray(rho0, dtype=complex)
    d = rho0.shape[0]
    operadores_perda = [np.asarray(L, dtype=complex) for L in operadores_perda]
    for op in operadores_perda + ([] if callable(H) else [np.asarray(H)]):
        if op.shape != (d, d):
            raise ErroParametro(f"Operador com forma {op.shape} incompatível com ρ {d}x{d}")
    if not rtol > 0:
        raise ErroParametro("Tolerância deve ser positiva")

    anticomutador = sum((L.conj().T @ L for L in operadores_perda), np.zeros((d, d), complex))
    pares = [(L, L.conj().T) for L in operadores_perda]
    H_fixo = None if callable(H) else np.asarray(H, dtype=complex)

    def derivada(t, y):
        rho = y.reshape(d, d)
        Ht = H(t) if H_fixo is None else H_fixo
        H_eff = Ht - 0.5j * anticomutador
        drho = -1j * (H_eff @ rho - rho @ H_eff.conj().T)
        for L, L_dag in pares:
            drho += L @ rho @ L_dag
        return drho.ravel()

    if t_eval is None:
        t_eval = np.linspace(t_span[0], t_span[1], 201)
    t_eval = np.asarray(t_eval, dtype=float)

    if passo_fixo is not None:
        ys = _rk4_fixo(derivada, t_eval, rho0.ravel(), passo_fixo)
        return Trajetoria(tempos=t_eval, rhos=ys.reshape(-1, d, d))

    resultado = solve_ivp(derivada, t_span, rho0.ravel(), method=metodo, t_eval=t_eval,
                          rtol=rtol, atol=atol)
    if resultado.status < 0:
        alcancado = resultado.t[-1] if resultado.t.size else t_span[0]
        raise ErroRigidez(
            f"Integração interrompida em t={alcancado:.3e} s de {t_span[1]:.3e} s: {resultado.message}"
        )
    rhos = resultado.y.T.reshape(-1, d, d)
    trajetoria = Trajetoria(tempos=resultado.t, rhos=rhos)
    desvio = float(np.max(np.abs(trajetoria.traco() - 1)))
    if desvio > 100 * rtol:
        logger.warning("Traço de ρ desviou %.2e durante a integração", desvio)
    return trajetoria


def _ajustar_exponencial(tempos, populacao, t_min=0.0):
    """Taxa de p(t) = p_inf + A e^{−r t} por mínimos quadrados"""
    if np.ptp(populacao) < 1e-9:
        return 0.0
    mascara = tempos >= t_min
    t, p = tempos[mascara], populacao[mascara]
    p_inf0 = p[-1]
    amplitude0 = p[0] - p_inf0
    # chute pela inclinação logarítmica inicial
    fracao = np.clip((p - p_inf0) / amplitude0, 1e-12, None)
    meio = max(2, len(t) // 4)
    inclinacao = -np.polyfit(t[:meio] - t[0], np.log(fracao[:meio]), 1)[0]
    taxa0 = inclinacao if inclinacao > 0 else 1 / (t[-1] - t[0])

    def modelo(tt, p_inf, amplitude, taxa):
        return p_inf + amplitude * np.exp(-taxa * (tt - t[0]))

    parametros, _ = curve_fit(modelo, t, p, p0=[p_inf0, amplitude0, taxa0], maxfev=20000)
    return float(parametros[2])


@dataclass
class ComparacaoResfriamento:
    tempos: np.ndarray
    populacao_completa: np.ndarray
    populacao_efetiva: np.ndarray
    taxa_completa: float
    taxa_efetiva: float
    avisos: list

    @property
    def erro_relativo(self):
        if self.taxa_efetiva == 0:
            return 0.0 if self.taxa_completa == 0 else math.inf
        return abs(self.taxa_completa - self.taxa_efetiva) / self.taxa_efetiva


def comparar_resfriamento_sideband(relatorio, duracao=None, dissipacao=None, n_cavidade=6,
                                   rwa=False, n_pontos=400, rtol=1e-8):
    """Modelo completo qubit⊗cavidade contra a equação efetiva de dois níveis

    O modelo completo usa, no referencial do bombeio, H = (ω_ge/2)σz − Δ_R a†a
    + g|c_x||α| σx (a + a†); com rwa=True só o processo mais próximo da
    ressonância é mantido.
    """
    dissipacao = dissipacao or DissipacaoQubit(Gamma=0.0)
    avisos = []
    if not relatorio.sideband_resolvido:
        avisos.append("sideband não resolvido (2ω_ge/κ < 5)")
    if relatorio.epsilon > 0.05:
        avisos.append(f"ε = {relatorio.epsilon:.3f} acima de 0.05")
    for aviso in avisos:
        logger.warning("Comparação de resfriamento: %s", aviso)

    taxa_relaxacao = relatorio.taxa_total + 2 * dissipacao.Gamma
    if duracao is None:
        if taxa_relaxacao == 0:
            raise ErroParametro("Sem bombeio nem dissipação: informe a duração")
        duracao = 8 / taxa_relaxacao
    tempos = np.linspace(0.0, duracao, n_pontos)

    # alvo |g> se o processo σ− domina; começa no estado oposto
    resfria_para_g = relatorio.taxa_menos >= relatorio.taxa_mais
    qubit0 = np.diag([0.0, 1.0]) if resfria_para_g else np.diag([1.0, 0.0])

    a = np.kron(np.eye(2), destruicao(n_cavidade))
    sp = np.kron(SIGMA_MAIS, np.eye(n_cavidade))
    sm = np.kron(SIGMA_MENOS, np.eye(n_cavidade))
    sz = np.kron(SIGMA_Z, np.eye(n_cavidade))
    G = relatorio.acoplamento
    H = 0.5 * relatorio.omega_ge * sz - relatorio.delta_R * (a.conj().T @ a)
    if rwa:
        if abs(relatorio.delta_R + relatorio.omega_ge) <= abs(relatorio.delta_R - relatorio.omega_ge):
            acoplamento = sm @ a.conj().T
        else:
            acoplamento = sp @ a.conj().T
        H = H + G * (acoplamento + acoplamento.conj().T)
    else:
        H = H + G * (sp + sm) @ (a + a.conj().T)

    vacuo = np.zeros((n_cavidade, n_cavidade))
    vacuo[0, 0] = 1
    rho0 = np.kron(qubit0, vacuo)
    perdas = [math.sqrt(relatorio.kappa) * a] + dissipacao.operadores_perda(n_cavidade)
    completa = evoluir_lindblad(H, perdas, rho0, (0.0, duracao), tempos, rtol=rtol)
    pop_completa = completa.expectativa(np.kron(PROJETOR_E, np.eye(n_cavidade)))

    perdas_efetivas = [math.sqrt(relatorio.taxa_mais) * SIGMA_MAIS,
                       math.sqrt(relatorio.taxa_menos) * SIGMA_MENOS]
    perdas_efetivas += dissipacao.operadores_perda()
    efetiva = evoluir_lindblad(np.zeros((2, 2)), perdas_efetivas, qubit0, (0.0, duracao),
                               tempos, rtol=rtol)
    pop_efetiva = efetiva.expectativa(PROJETOR_E)

    # transiente inicial da cavidade fica fora do ajuste
    t_min = min(10 / relatorio.kappa, duracao / 4)
    return ComparacaoResfriamento(
        tempos=tempos,
        populacao_completa=pop_completa,
        populacao_efetiva=pop_efetiva,
        taxa_completa=_ajustar_exponencial(tempos, pop_completa, t_min),
        taxa_efetiva=_ajustar_exponencial(tempos, pop_efetiva, t_min),
        avisos=avisos,
    )


def mapa_resfriamento(params, cavidade, fluxos, dessintonias, abs_alfa, dissipacao,
                      base=ConfiguracaoBase(), threads=1):
    """Mapa de ⟨σz⟩ estacionário em (φ_ext, Δ_R) com |α| mantido constante

    fluxos em rad, dessintonias Δ_R em rad/s. Retorna DataFrame em formato longo.
    """
    solucoes, operadores = resolver_fluxos(params, fluxos, base, k=2, threads=threads)
    g = cavidade.g(params.E_J_Hz)
    linhas = []
    for phi_ext, sol in zip(fluxos, solucoes):
        if sol is None:
            for delta_R in dessintonias:
                linhas.append((phi_ext, delta_R, math.nan, math.nan, math.nan, math.nan))
            continue
        omega_ge = sol.energias[1] - sol.energias[0]
        elementos = elementos_matriz(sol, operadores, phi_ext)
        for delta_R in dessintonias:
            rel = taxas_perda_efetivas(elementos, g, abs_alfa, cavidade.kappa, delta_R, omega_ge)
            sz = populacao_estacionaria(rel.taxa_mais, rel.taxa_menos, dissipacao.Gamma)
            linhas.append((phi_ext, delta_R, omega_ge, rel.taxa_mais, rel.taxa_menos, sz))

    mapa = pd.DataFrame(linhas, columns=['phi_ext_rad', 'delta_R_rad_s', 'omega_ge_rad_s',
                                         'taxa_mais_1_s', 'taxa_menos_1_s', 'sigma_z'])
    return mapa


@dataclass
class RelatorioRampa:
    tempos: np.ndarray
    fidelidade: np.ndarray   # população no fundamental instantâneo
    fluxos: np.ndarray

    @property
    def fidelidade_final(self):
        return float(self.fidelidade[-1])


def fluxo_da_agenda(agenda, t):
    """Interpolação linear por partes de [(t_s, φ_ext), ...]"""
    tempos = np.array([p[0] for p in agenda], dtype=float)
    valores = np.array([p[1] for p in agenda], dtype=float)
    return np.interp(t, tempos, valores)


def evoluir_rampa_fluxo(params, agenda, base=ConfiguracaoBase(), n_niveis=2, dissipacao=None,
                        n_pontos=201, rtol=1e-8):
    """Evolui o fundamental ao longo de uma rampa de fluxo e mede a adiabaticidade

    H(φ) = H_osc − E_J[cos φ cos φ̂ + sin φ sin φ̂] é projetado nos n_niveis
    autoestados do fluxo final, o que permite reconstruí-lo a cada passo.
    """
    if len(agenda) < 2:
        raise ErroParametro("A agenda de fluxo precisa de ao menos dois pontos")
    tempos_agenda = [p[0] for p in agenda]
    if any(b <= a for a, b in zip(tempos_agenda[:-1], tempos_agenda[1:])):
        raise ErroParametro("Tempos da agenda devem ser estritamente crescentes")

    operadores = construir_operadores(params, base)
    phi_ref = float(agenda[-1][1])
    ref = diagonalizar_e_rotular(construir_hamiltoniano(params, phi_ref, base, operadores), n_niveis)
    V = ref.estados
    w = CONSTANTES.hz_para_rad(1.0)
    D = operadores.dimensao
    oscilador = V.T @ np.diag(params.frequencia_plasma_Hz * (np.arange(D) + 0.5)) @ V * w
    cos_p = V.T @ operadores.cos_fase(0.0) @ V * w * params.E_J_Hz
    sin_p = V.T @ operadores.sin_fase(0.0) @ V * w * params.E_J_Hz

    def hamiltoniano(t):
        phi = fluxo_da_agenda(agenda, t)
        H = oscilador - math.cos(phi) * cos_p - math.sin(phi) * sin_p
        return (H - np.trace(H) / n_niveis * np.eye(n_niveis)).astype(complex)

    t0, t1 = tempos_agenda[0], tempos_agenda[-1]
    tempos = np.linspace(t0, t1, n_pontos)
    _, vetores = linalg.eigh(hamiltoniano(t0))
    psi0 = vetores[:, 0]
    rho0 = np.outer(psi0, psi0.conj())
    perdas = []
    if dissipacao is not None and dissipacao.Gamma > 0 and n_niveis >= 2:
        projecao_mais = np.zeros((n_niveis, n_niveis), complex)
        projecao_mais[1, 0] = 1
        perdas = [math.sqrt(dissipacao.Gamma) * projecao_mais,
                  math.sqrt(dissipacao.Gamma) * projecao_mais.T]
    trajetoria = evoluir_lindblad(hamiltoniano, perdas, rho0, (t0, t1), tempos, rtol=rtol,
                                  atol=1e-12)

    fidelidade = []
    for t, rho in zip(trajetoria.tempos, trajetoria.rhos):
        _, vetores = linalg.eigh(hamiltoniano(t))
        fundamental = vetores[:, 0]
        fidelidade.append(float(np.real(fundamental.conj() @ rho @ fundamental)))
    return RelatorioRampa(tempos=trajetoria.tempos, fidelidade=np.array(fidelidade),
                          fluxos=fluxo_da_agenda(agenda, trajetoria.tempos))


@dataclass
class EstadoBloch:
    sx: np.ndarray
    sy: np.ndarray
    sz: np.ndarray

    @property
    def norma(self):
        return np.sqrt(self.sx ** 2 + self.sy ** 2 + self.sz ** 2)

    @property
    def transversal(self):
        return self.sx + 1j * self.sy


def bloch_forma_fechada(Omega, Delta, Gamma, t):
    """Solução das equações de Bloch a partir de ⟨σz⟩ = −1 (Ω, Δ em rad/s; Γ em 1/s)"""
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ErroParametro("Tempo negativo")
    decaimento = np.exp(-2 * Gamma * t)
    W2 = Omega ** 2 + Delta ** 2
    if W2 == 0:
        zeros = np.zeros_like(t)
        return EstadoBloch(zeros, zeros.copy(), -decaimento)
    W = math.sqrt(W2)
    cos_wt = np.cos(W * t)
    sx = decaimento * (cos_wt - 1) * Delta * Omega / W2
    sy = decaimento * np.sin(W * t) * Omega / W
    sz = -decaimento * (Delta ** 2 + Omega ** 2 * cos_wt) / W2
    return EstadoBloch(sx, sy, sz)


def equacoes_bloch(t, s, Omega, Delta, Gamma):
    sx, sy, sz = s
    return [
        -Delta * sy - 2 * Gamma * sx,
        -Omega * sz + Delta * sx - 2 * Gamma * sy,
        Omega * sy - 2 * Gamma * sz,
    ]


def integrar_bloch(Omega, Delta, Gamma, tempos, rtol=1e-11, atol=1e-13):
    """Integração adaptativa das equações de Bloch (oráculo da forma fechada)"""
    tempos = np.asarray(tempos, dtype=float)
    resultado = solve_ivp(equacoes_bloch, (0.0, tempos[-1]), [0.0, 0.0, -1.0], method='DOP853',
                          t_eval=tempos, args=(Omega, Delta, Gamma), rtol=rtol, atol=atol)
    if resultado.status < 0:
        raise ErroRigidez(f"Integração de Bloch falhou: {resultado.message}")
    return EstadoBloch(*resultado.y)


def resposta_detector(Delta, Omega, tau_I):
    """Resposta em frequência f(Δ): (exata, aproximação sinc(Δ/Ω_full))"""
    if not tau_I > 0:
        raise ErroParametro("tau_I deve ser positivo")
    Delta = np.asarray(Delta, dtype=float)
    W2 = Omega ** 2 + Delta ** 2
    W = np.sqrt(W2)
    with np.errstate(invalid='ignore', divide='ignore'):
        exata = np.sqrt((Delta ** 2 * np.sinc(W * tau_I / (2 * math.pi)) ** 2
                         + Omega ** 2 * np.sinc(W * tau_I / math.pi) ** 2) / W2)
    exata = np.where(W2 == 0, 1.0, exata)
    omega_full = 2 * math.pi / tau_I
    aproximada = np.sinc(Delta / omega_full)
    return exata, aproximada


def frequencia_rabi(N_drive, omega_ge, phi_eg):
    """Ω_r = 2 N_drive ω_ge |⟨e|φ̂|g⟩|"""
    return 2 * N_drive * omega_ge * abs(phi_eg)


def populacao_rabi_rwa(Omega, Delta, t):
    """Fórmula de Rabi na aproximação de onda girante"""
    W2 = Omega ** 2 + Delta ** 2
    if W2 == 0:
        return np.zeros_like(np.asarray(t, dtype=float))
    return Omega ** 2 / W2 * np.sin(np.sqrt(W2) * np.asarray(t) / 2) ** 2


def chevron_rabi(params, amplitudes, frequencias, duracoes, base=ConfiguracaoBase(),
                 phi_ext=math.pi, n_niveis=2, rtol=1e-9, threads=1):
    """Populações sob acionamento de carga sem aproximação de onda girante

    O termo de acionamento é −8E_C·(2N_drive)cos(ω_d t)·n̂ nos n_niveis mais
    baixos, de modo que no limite de onda girante Ω_r = 2N_drive ω_ge|φ_eg|.

    Args:
        amplitudes: valores de N_drive
        frequencias: ω_d em rad/s
        duracoes: tempos de acionamento em s

    Returns:
        DataFrame com colunas N_drive, omega_d_rad_s, t_s e p_<rótulo>
    """
    if not 2 <= n_niveis <= 4:
        raise ErroParametro("n_niveis deve estar entre 2 e 4")
    operadores = construir_operadores(params, base)
    sol = diagonalizar_e_rotular(construir_hamiltoniano(params, phi_ext, base, operadores), n_niveis)
    energias = sol.energias - sol.energias[0]
    carga = sol.estados.conj().T @ operadores.carga @ sol.estados
    E_C = CONSTANTES.hz_para_rad(params.E_C_Hz)
    H0 = np.diag(energias).astype(complex)

    duracoes = np.asarray(sorted(duracoes), dtype=float)
    if duracoes[0] < 0:
        raise ErroParametro("Durações devem ser não negativas")
    t_eval = duracoes if duracoes[0] == 0 else np.concatenate([[0.0], duracoes])
    psi0 = np.zeros(n_niveis, complex)
    psi0[0] = 1

    def evoluir(par):
        N_drive, omega_d = par
        acoplamento = -16 * E_C * N_drive * carga

        def derivada(t, psi):
            return -1j * ((H0 + math.cos(omega_d * t) * acoplamento) @ psi)

        if t_eval[-1] == 0:
            pops = np.abs(np.tile(psi0, (len(t_eval), 1))) ** 2
        else:
            res = solve_ivp(derivada, (0.0, t_eval[-1]), psi0, method='DOP853', t_eval=t_eval,
                            rtol=rtol, atol=1e-12)
            if res.status < 0:
                raise ErroRigidez(f"Rabi N={N_drive}, ω_d={omega_d:.4e}: {res.message}")
            pops = np.abs(res.y.T) ** 2
        if duracoes[0] != 0:
            pops = pops[1:]
        return [(N_drive, omega_d, t, *p) for t, p in zip(duracoes, pops)]

    pares = [(float(N), float(w)) for N in amplitudes for w in frequencias]
    with ThreadPoolExecutor(max_workers=max(1, int(threads))) as executor:
        blocos = list(executor.map(evoluir, pares))

    colunas = ['N_drive', 'omega_d_rad_s', 't_s'] + [f"p_{r}" for r in list(sol.rotulos)[:n_niveis]]
    return pd.DataFrame([linha for bloco in blocos for linha in bloco], columns=colunas)
