import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
import pandas as pd
from scipy import linalg

from fisica.constantes import CONSTANTES
from fisica.erros import ErroNumerico, ErroParametro

logger = logging.getLogger(__name__)

ROTULOS = ('g', 'e', 'f', 'h')

# Pares de transição reportados, na ordem das colunas do CSV de espectro
PARES_TRANSICAO = (('g', 'e'), ('g', 'f'), ('g', 'h'), ('e', 'f'), ('e', 'h'), ('f', 'h'))


@dataclass(frozen=True)
class ParametrosCircuito:
    """Energias do fluxonium em Hz (energia dividida por h)"""
    E_J_Hz: float
    E_C_Hz: float
    E_L_Hz: float
    E_JA_Hz: float = None
    E_p_Hz: float = None
    n_juncoes_array: int = None

    def __post_init__(self):
        for nome in ('E_J_Hz', 'E_C_Hz', 'E_L_Hz'):
            valor = getattr(self, nome)
            if not (np.isfinite(valor) and valor > 0):
                raise ErroParametro(f"{nome} deve ser positivo (recebido {valor})")
        for nome in ('E_JA_Hz', 'E_p_Hz', 'n_juncoes_array'):
            valor = getattr(self, nome)
            if valor is not None and not valor > 0:
                raise ErroParametro(f"{nome} deve ser positivo (recebido {valor})")

    @property
    def frequencia_plasma_Hz(self):
        """√(8 E_C E_L), espaçamento do oscilador com E_J = 0"""
        return math.sqrt(8 * self.E_C_Hz * self.E_L_Hz)

    @property
    def fluxonium_pesado(self):
        return self.E_J_Hz >= 10 * self.E_C_Hz and self.E_J_Hz >= 10 * self.E_L_Hz

    @property
    def array_valido(self):
        """E_JA/E_p ≥ 3 (taxa de phase-slip desprezível); None sem dados do array"""
        if self.E_JA_Hz is None or self.E_p_Hz is None:
            return None
        return self.E_JA_Hz / self.E_p_Hz >= 3


def classificar_regime(params):
    """Resume as verificações de regime do circuito"""
    regime = {
        'fluxonium_pesado': params.fluxonium_pesado,
        'razao_EJ_EC': params.E_J_Hz / params.E_C_Hz,
        'razao_EJ_EL': params.E_J_Hz / params.E_L_Hz,
        'array_valido': params.array_valido,
    }
    if params.E_JA_Hz is not None and params.E_p_Hz is not None:
        regime['razao_EJA_Ep'] = params.E_JA_Hz / params.E_p_Hz
    if params.E_JA_Hz is not None and params.n_juncoes_array:
        # indutância do array em série: E_L ≈ E_JA / n
        regime['E_L_array_Hz'] = params.E_JA_Hz / params.n_juncoes_array

    if not params.fluxonium_pesado:
        logger.warning("Parâmetros fora do regime de fluxonium pesado (E_J/E_C=%.2f)",
                       regime['razao_EJ_EC'])
    if regime['array_valido'] is False:
        logger.warning("Array de junções com E_JA/E_p < 3: phase-slips não desprezíveis")
    return regime


@dataclass(frozen=True)
class ConfiguracaoBase:
    """Truncamento da base do oscilador harmônico (E_J = 0)"""
    dimensao: int = 120

    def __post_init__(self):
        if int(self.dimensao) != self.dimensao or self.dimensao < 20:
            raise ErroParametro(f"Dimensão da base deve ser inteira e >= 20 (recebido {self.dimensao})")

    @staticmethod
    def comprimento_oscilador(params):
        """ℓ com ℓ² = √(8E_C/E_L); sempre recalculado a partir dos parâmetros"""
        return (8 * params.E_C_Hz / params.E_L_Hz) ** 0.25


@dataclass
class Operadores:
    """Operadores de fase e carga na base de Fock truncada"""
    fase: np.ndarray
    carga: np.ndarray
    deslocamento: np.ndarray
    comprimento: float
    autovalores_fase: np.ndarray = field(repr=False)
    autovetores_fase: np.ndarray = field(repr=False)

    @property
    def dimensao(self):
        return self.fase.shape[0]

    def cos_fase(self, phi_ext):
        """cos(φ̂ − φ_ext) = Re[e^{−iφ_ext} exp(iφ̂)] pela decomposição espectral de φ̂"""
        U = self.autovetores_fase
        return (U * np.cos(self.autovalores_fase - phi_ext)) @ U.T

    def sin_fase(self, phi_ext=0.0):
        U = self.autovetores_fase
        return (U * np.sin(self.autovalores_fase - phi_ext)) @ U.T


def construir_operadores(params, base=ConfiguracaoBase()):
    """Constrói φ̂, n̂ e exp(iφ̂) na base do oscilador

    Args:
        params: ParametrosCircuito
        base: ConfiguracaoBase com a dimensão D

    Returns:
        Operadores
    """
    if not isinstance(params, ParametrosCircuito):
        raise ErroParametro("params deve ser ParametrosCircuito")
    D = int(base.dimensao)
    ell = base.comprimento_oscilador(params)

    # operador de aniquilação: a|k> = √k |k-1>
    a = np.diag(np.sqrt(np.arange(1, D, dtype=float)), k=1)
    fase = ell * (a + a.T) / math.sqrt(2)
    carga = 1j * (a.T - a) / (ell * math.sqrt(2))

    autovalores, autovetores = linalg.eigh(fase)
    deslocamento = (autovetores * np.exp(1j * autovalores)) @ autovetores.T

    return Operadores(
        fase=fase,
        carga=carga,
        deslocamento=deslocamento,
        comprimento=ell,
        autovalores_fase=autovalores,
        autovetores_fase=autovetores,
    )


def construir_hamiltoniano(params, phi_ext, base=ConfiguracaoBase(), operadores=None):
    """Hamiltoniano do fluxonium em rad/s (ℏ = 1), n_g = 0

    H = −E_J cos(φ̂ − φ_ext) + 4E_C n̂² + (E_L/2)φ̂²
    """
    if operadores is None:
        operadores = construir_operadores(params, base)
    elif operadores.dimensao != base.dimensao:
        raise ErroNumerico(
            f"Dimensão dos operadores ({operadores.dimensao}) difere da base ({base.dimensao})"
        )
    if not np.isfinite(phi_ext):
        raise ErroParametro(f"Fluxo externo não finito: {phi_ext}")

    D = operadores.dimensao
    # 4E_C n̂² + (E_L/2)φ̂² = ω_p(a†a + 1/2) exatamente na base do oscilador
    oscilador = np.diag(params.frequencia_plasma_Hz * (np.arange(D) + 0.5))
    H = oscilador - params.E_J_Hz * operadores.cos_fase(phi_ext)
    return CONSTANTES.hz_para_rad(H)


@dataclass
class SolucaoAutovalores:
    energias: np.ndarray   # rad/s, crescentes
    estados: np.ndarray    # colunas ortonormais
    rotulos: dict
    residuo: float = 0.0

    @property
    def energias_Hz(self):
        return CONSTANTES.rad_para_hz(self.energias)

    def estado(self, rotulo):
        return self.estados[:, self.rotulos[rotulo]]


def _fixar_fase(estados):
    # maior coeficiente em módulo real e positivo
    estados = np.array(estados, dtype=complex if np.iscomplexobj(estados) else float)
    for j in range(estados.shape[1]):
        i = np.argmax(np.abs(estados[:, j]))
        c = estados[i, j]
        estados[:, j] *= np.conj(c) / abs(c)
    return estados


def diagonalizar_e_rotular(H, k=4):
    """Autopares mais baixos de H, em ordem crescente, com rótulos g, e, f, h"""
    H = np.asarray(H)
    D = H.shape[0]
    if not 1 <= k <= D:
        raise ErroParametro(f"k deve estar entre 1 e {D} (recebido {k})")
    try:
        energias, estados = linalg.eigh(H, subset_by_index=[0, k - 1])
    except linalg.LinAlgError as e:
        raise ErroNumerico(f"Diagonalização não convergiu: {e}") from e

    estados = _fixar_fase(estados)
    if not np.iscomplexobj(H):
        estados = estados.real

    norma = np.linalg.norm(H, ord=2)
    residuo = float(np.max(np.linalg.norm(H @ estados - estados * energias, axis=0)))
    if residuo > 1e-9 * norma:
        raise ErroNumerico(
            f"Resíduo dos autopares {residuo:.3e} acima de 1e-9·‖H‖ = {1e-9 * norma:.3e}"
        )

    rotulos = {r: i for i, r in enumerate(ROTULOS[:k])}
    return SolucaoAutovalores(energias=energias, estados=estados, rotulos=rotulos, residuo=residuo)


@dataclass
class TabelaTransicoes:
    """Frequências de transição (Hz) num ponto de fluxo"""
    phi_ext: float
    f_ge: float
    f_gf: float
    f_gh: float
    f_ef: float
    f_eh: float
    f_fh: float

    @classmethod
    def de_solucao(cls, sol, phi_ext):
        E = sol.energias_Hz
        r = sol.rotulos
        freqs = {f"f_{i}{j}": E[r[j]] - E[r[i]] for i, j in PARES_TRANSICAO}
        return cls(phi_ext=phi_ext, **freqs)

    @classmethod
    def vazia(cls, phi_ext):
        return cls(phi_ext, *([math.nan] * len(PARES_TRANSICAO)))

    def como_linha(self):
        return {
            'phi_ext_rad': self.phi_ext,
            'f_ge_Hz': self.f_ge,
            'f_gf_Hz': self.f_gf,
            'f_gh_Hz': self.f_gh,
            'f_ef_Hz': self.f_ef,
            'f_eh_Hz': self.f_eh,
            'f_fh_Hz': self.f_fh,
        }


COLUNAS_ESPECTRO = list(TabelaTransicoes.vazia(0.0).como_linha())


def _ordenar_por_continuidade(anterior, atual, tolerancia):
    """Troca pares quase degenerados pela continuidade da sobreposição"""
    sobreposicao = np.abs(anterior.estados.conj().T @ atual.estados)
    ordem = list(range(len(atual.energias)))
    for i in range(len(ordem) - 1):
        if atual.energias[i + 1] - atual.energias[i] < tolerancia:
            direta = sobreposicao[i, i] + sobreposicao[i + 1, i + 1]
            cruzada = sobreposicao[i, i + 1] + sobreposicao[i + 1, i]
            if cruzada > direta:
                ordem[i], ordem[i + 1] = ordem[i + 1], ordem[i]
    if ordem != list(range(len(ordem))):
        atual = SolucaoAutovalores(
            energias=atual.energias[ordem],
            estados=atual.estados[:, ordem],
            rotulos=atual.rotulos,
            residuo=atual.residuo,
        )
    return atual


def resolver_fluxos(params, fluxos, base=ConfiguracaoBase(), k=4, threads=1, operadores=None):
    """Diagonaliza cada ponto da grade; falhas viram None e a varredura continua"""
    if operadores is None:
        operadores = construir_operadores(params, base)

    def resolver(phi_ext):
        try:
            H = construir_hamiltoniano(params, phi_ext, base, operadores)
            return diagonalizar_e_rotular(H, k)
        except ErroNumerico as e:
            logger.error("❌ Falha na diagonalização em φ_ext=%.6f: %s", phi_ext, e)
            return None

    fluxos = [float(f) for f in fluxos]
    with ThreadPoolExecutor(max_workers=max(1, int(threads))) as executor:
        solucoes = list(executor.map(resolver, fluxos))

    tolerancia = 1e-9 * CONSTANTES.hz_para_rad(params.frequencia_plasma_Hz) * base.dimensao
    anterior = None
    for i, sol in enumerate(solucoes):
        if sol is None:
            continue
        if anterior is not None:
            sol = _ordenar_por_continuidade(anterior, sol, tolerancia)
            solucoes[i] = sol
        anterior = sol
    return solucoes, operadores


def espectro_vs_fluxo(params, fluxos, base=ConfiguracaoBase(), threads=1):
    """Tabela de transições por ponto de fluxo (φ_ext em rad)"""
    solucoes, _ = resolver_fluxos(params, fluxos, base, threads=threads)
    tabelas = []
    for phi_ext, sol in zip(fluxos, solucoes):
        if sol is None:
            tabelas.append(TabelaTransicoes.vazia(float(phi_ext)))
        else:
            tabelas.append(TabelaTransicoes.de_solucao(sol, float(phi_ext)))
    return tabelas


def tabelas_para_dataframe(tabelas):
    return pd.DataFrame([t.como_linha() for t in tabelas], columns=COLUNAS_ESPECTRO)


def divisao_tunelamento(params, base=ConfiguracaoBase()):
    """E_S/h = ω_ge/2π no ponto de frustração"""
    sol = diagonalizar_e_rotular(construir_hamiltoniano(params, math.pi, base), 2)
    return float(sol.energias_Hz[1] - sol.energias_Hz[0])


@dataclass
class ElementosMatriz:
    """Elementos ⟨i|O|j⟩ entre g, e, f, h (índices na ordem de ROTULOS)"""
    fase: np.ndarray
    carga: np.ndarray
    cos: np.ndarray
    c0: float
    cx: complex
    cz: float

    def elemento(self, operador, i, j):
        matriz = getattr(self, operador)
        return matriz[ROTULOS.index(i), ROTULOS.index(j)]


def elementos_matriz(sol, operadores, phi_ext):
    """Elementos de fase, carga e cos(φ̂ − φ_ext) mais as combinações c0, cx, cz"""
    V = sol.estados
    fase = V.conj().T @ operadores.fase @ V
    carga = V.conj().T @ operadores.carga @ V
    cos = V.conj().T @ operadores.cos_fase(phi_ext) @ V

    g, e = sol.rotulos['g'], sol.rotulos['e']
    return ElementosMatriz(
        fase=np.asarray(fase, dtype=complex),
        carga=np.asarray(carga, dtype=complex),
        cos=np.asarray(cos, dtype=complex),
        c0=float(np.real(cos[g, g] + cos[e, e]) / 2),
        cx=complex(cos[g, e]),
        cz=float(np.real(cos[e, e] - cos[g, g]) / 2),
    )


def oraculo_grade(params, phi_ext, n_pontos=8192, extensao=8 * math.pi, k=4):
    """Energias (rad/s) por diferenças finitas em φ ∈ [−extensao, extensao]

    Diagonaliza a forma tridiagonal com n e 2n+1 pontos internos (passo h e h/2)
    e combina por extrapolação de Richardson.
    """
    if n_pontos < 2048:
        raise ErroParametro("A grade precisa de pelo menos 2048 pontos")

    def energias(n):
        passo = 2 * extensao / (n + 1)
        phi = -extensao + passo * np.arange(1, n + 1)
        cinetico = 4 * params.E_C_Hz / passo ** 2
        diagonal = (2 * cinetico + 0.5 * params.E_L_Hz * phi ** 2
                    - params.E_J_Hz * np.cos(phi - phi_ext))
        fora = np.full(n - 1, -cinetico)
        return linalg.eigh_tridiagonal(diagonal, fora, select='i', select_range=(0, k - 1),
                                       eigvals_only=True)

    grossa = energias(n_pontos)
    fina = energias(2 * n_pontos + 1)
    return CONSTANTES.hz_para_rad((4 * fina - grossa) / 3)
