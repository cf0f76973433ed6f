"""Leituras sintéticas e os ajustes de calibração (fidelidade de preparação, temperaturas, T1, T2*)."""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
import pandas as pd
from scipy.optimize import curve_fit, least_squares
from scipy.signal import find_peaks
from scipy.special import expit, logit
from scipy.stats import norm

from fisica.constantes import CONSTANTES
from fisica.erros import ErroAjuste, ErroEntrada, ErroParametro

logger = logging.getLogger(__name__)

ESTADOS = ('g', 'e', 'f', 'h')
PARAMETROS_PREPARACAO = ('P_esq_g', 'P_esq_e', 'P_esq_h', 'Pg_prep_g', 'Pg_prep_e')
CHUTE_PREPARACAO = {'P_esq_g': 0.95, 'P_esq_e': 0.95, 'P_esq_h': 0.1,
                    'Pg_prep_g': 0.9, 'Pg_prep_e': 0.1}
PG_PREP_TERMICO = 0.5


@dataclass(frozen=True)
class ModeloLeitura:
    """Nuvens gaussianas no plano IQ; 'esquerda' significa I < limiar"""
    centros: dict
    sigma: float
    limiar: float = 0.0

    def __post_init__(self):
        if not self.sigma > 0:
            raise ErroParametro("sigma das nuvens deve ser positivo")
        faltando = [e for e in ESTADOS if e not in self.centros]
        if faltando:
            raise ErroParametro(f"Centros ausentes para os estados: {', '.join(faltando)}")

    def prob_esquerda(self, estado):
        """P[esquerda|estado] pela cauda gaussiana em I"""
        I = self.centros[estado][0]
        return float(norm.cdf((self.limiar - I) / self.sigma))


def _validar_populacoes(populacoes):
    if isinstance(populacoes, dict):
        populacoes = [populacoes.get(e, 0.0) for e in ESTADOS]
    p = np.asarray(populacoes, dtype=float)
    if p.shape != (4,) or np.any(p < 0) or abs(p.sum() - 1) > 1e-9:
        raise ErroEntrada(f"Populações inválidas sobre {ESTADOS}: {p.tolist()}")
    return p / p.sum()


def sintetizar_iq(populacoes, modelo, n_disparos, semente=0):
    """Sorteia estado e ponto (I, Q) por disparo; DataFrame com colunas estado, I, Q"""
    p = _validar_populacoes(populacoes)
    rng = np.random.default_rng(semente)
    indices = rng.choice(4, size=int(n_disparos), p=p)
    centros = np.array([modelo.centros[e] for e in ESTADOS], dtype=float)
    pontos = centros[indices] + modelo.sigma * rng.standard_normal((int(n_disparos), 2))
    return pd.DataFrame({
        'estado': np.array(ESTADOS)[indices],
        'I': pontos[:, 0],
        'Q': pontos[:, 1],
    })


def fracao_esquerda(iq, limiar=0.0):
    return float((iq['I'] < limiar).mean())


def modelo_curvas_rabi(theta, Pg, P_esq_g, P_esq_e, P_esq_h):
    """P[esquerda](θ) após preparação com população Pg em |g> e pulso g↔h de ângulo θ"""
    theta = np.asarray(theta, dtype=float)
    return (Pg * (P_esq_g + P_esq_h) / 2 + (1 - Pg) * P_esq_e
            + Pg * np.cos(theta) * (P_esq_g - P_esq_h) / 2)


@dataclass
class AjustePreparacao:
    parametros: dict
    media: dict
    desvio: dict
    custo: float
    n_reamostragens: int
    na_fronteira: list = field(default_factory=list)
    Pg_prep_th: float = PG_PREP_TERMICO


def _empilhar_curvas(theta, curvas):
    faltando = [j for j in ('g', 'e', 'th') if j not in curvas]
    if faltando:
        raise ErroEntrada(f"Curvas ausentes: {', '.join(faltando)}")
    thetas, dados, preparacoes = [], [], []
    for indice, j in enumerate(('g', 'e', 'th')):
        y = np.asarray(curvas[j], dtype=float)
        if y.shape != np.shape(theta):
            raise ErroEntrada(f"Curva {j} com {y.size} pontos, θ tem {np.size(theta)}")
        thetas.append(np.asarray(theta, dtype=float))
        dados.append(y)
        preparacoes.append(np.full(y.size, indice))
    return np.concatenate(thetas), np.concatenate(dados), np.concatenate(preparacoes)


def _previsao(x, theta, preparacao):
    P_esq_g, P_esq_e, P_esq_h, Pg_g, Pg_e = expit(x)
    Pg = np.choose(preparacao, [Pg_g, Pg_e, PG_PREP_TERMICO])
    return modelo_curvas_rabi(theta, Pg, P_esq_g, P_esq_e, P_esq_h)


def _ajustar(theta, y, preparacao, x0):
    resultado = least_squares(lambda x: _previsao(x, theta, preparacao) - y, x0,
                              method='trf', xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=2000)
    if not resultado.success:
        raise ErroAjuste(f"Ajuste das curvas de Rabi não convergiu (custo {resultado.cost:.3e}): "
                         f"{resultado.message}")
    return resultado


def ajustar_curvas_rabi(theta, curvas, n_bootstrap=200, semente=0, threads=1, chute=None):
    """Ajuste conjunto das três curvas com Pg_prep_th = 0.5 e bootstrap dos pontos

    Args:
        theta: ângulos do pulso (rad), comuns às três curvas
        curvas: {'g': ..., 'e': ..., 'th': ...} com P[esquerda](θ)
        n_bootstrap: reamostragens com reposição (>= 200)
    """
    if n_bootstrap < 200:
        raise ErroParametro("São necessárias ao menos 200 reamostragens")
    theta_todos, y, preparacao = _empilhar_curvas(theta, curvas)
    chute = {**CHUTE_PREPARACAO, **(chute or {})}
    x0 = logit(np.array([chute[nome] for nome in PARAMETROS_PREPARACAO]))

    principal = _ajustar(theta_todos, y, preparacao, x0)
    estimativa = expit(principal.x)

    sementes = np.random.SeedSequence(semente).spawn(n_bootstrap)

    def reamostrar(semente_filha):
        rng = np.random.default_rng(semente_filha)
        indices = rng.integers(0, y.size, size=y.size)
        return expit(_ajustar(theta_todos[indices], y[indices], preparacao[indices], principal.x).x)

    with ThreadPoolExecutor(max_workers=max(1, int(threads))) as executor:
        amostras = np.array(list(executor.map(reamostrar, sementes)))

    na_fronteira = [nome for nome, p in zip(PARAMETROS_PREPARACAO, estimativa)
                    if p < 1e-4 or p > 1 - 1e-4]
    for nome in na_fronteira:
        logger.warning("Parâmetro %s na fronteira de [0, 1]", nome)

    return AjustePreparacao(
        parametros=dict(zip(PARAMETROS_PREPARACAO, estimativa.tolist())),
        media=dict(zip(PARAMETROS_PREPARACAO, amostras.mean(axis=0).tolist())),
        desvio=dict(zip(PARAMETROS_PREPARACAO, amostras.std(axis=0, ddof=1).tolist())),
        custo=float(principal.cost),
        n_reamostragens=n_bootstrap,
        na_fronteira=na_fronteira,
    )


@dataclass
class ResultadoHistograma:
    p_ge: float
    p_fh: float
    desvio_p_fh: float
    degenerado: bool
    centros: tuple       # (ge, f, h) em I
    sigma: float
    contagens: np.ndarray = field(repr=False)
    bordas: np.ndarray = field(repr=False)


def ajustar_histograma_termico(I, sigma_blob, centros=None, n_bins=128):
    """Ajuste de três gaussianas ao histograma em I, com áreas de f e h iguais

    Args:
        I: quadratura I dos disparos
        sigma_blob: largura das nuvens (define a janela de ±5σ)
        centros: chute opcional (I_ge, I_f, I_h); sem ele os picos são procurados
    """
    I = np.asarray(I, dtype=float)
    if I.size == 0:
        raise ErroEntrada("Histograma vazio")
    if centros is not None:
        referencia = np.asarray(centros, dtype=float)
        inicio, fim = referencia.min() - 5 * sigma_blob, referencia.max() + 5 * sigma_blob
    else:
        inicio, fim = I.min() - sigma_blob, I.max() + sigma_blob
    contagens, bordas = np.histogram(I, bins=n_bins, range=(inicio, fim))
    meio = (bordas[:-1] + bordas[1:]) / 2
    largura_bin = bordas[1] - bordas[0]

    picos, propriedades = find_peaks(contagens, prominence=0.005 * contagens.max(),
                                     distance=max(1, int(sigma_blob / largura_bin)))
    degenerado = len(picos) < 3
    if centros is None:
        if degenerado:
            raise ErroAjuste(f"Busca de picos encontrou {len(picos)} picos, esperados 3")
        principais = picos[np.argsort(propriedades['prominences'])[::-1][:3]]
        ge = principais[np.argmax(contagens[principais])]
        outros = sorted(p for p in principais if p != ge)
        centros = (meio[ge], meio[outros[0]], meio[outros[1]])
    if degenerado:
        logger.warning("Histograma com %d pico(s): população f/h possivelmente nula", len(picos))

    total = contagens.sum()
    pesos = 1 / np.sqrt(np.maximum(contagens, 1))

    def esperado(x):
        A_ge, A_fh, mu_ge, mu_f, mu_h, sigma = x
        cdf = lambda mu: norm.cdf((bordas - mu) / sigma)
        return (A_ge * np.diff(cdf(mu_ge))
                + A_fh / 2 * (np.diff(cdf(mu_f)) + np.diff(cdf(mu_h))))

    x0 = [0.9 * total, 0.1 * total, *centros, sigma_blob]
    limites = ([0, 0, -np.inf, -np.inf, -np.inf, 1e-6 * sigma_blob], np.inf)
    resultado = least_squares(lambda x: (esperado(x) - contagens) * pesos, x0, bounds=limites,
                              x_scale='jac')
    if not resultado.success:
        raise ErroAjuste(f"Ajuste de três gaussianas falhou: {resultado.message}")

    A_ge, A_fh = resultado.x[:2]
    soma = A_ge + A_fh
    p_fh = A_fh / soma
    # propagação linear da covariância das áreas
    try:
        covariancia = np.linalg.pinv(resultado.jac.T @ resultado.jac)[:2, :2]
        gradiente = np.array([-A_fh, A_ge]) / soma ** 2
        desvio = float(math.sqrt(max(gradiente @ covariancia @ gradiente, 0.0)))
    except np.linalg.LinAlgError:
        desvio = math.nan

    return ResultadoHistograma(
        p_ge=float(A_ge / soma),
        p_fh=float(p_fh),
        desvio_p_fh=desvio,
        degenerado=degenerado,
        centros=tuple(float(c) for c in resultado.x[2:5]),
        sigma=float(resultado.x[5]),
        contagens=contagens,
        bordas=bordas,
    )


@dataclass
class EstimativaTemperatura:
    temperatura_K: float
    frequencia_Hz: float
    razao: float
    valida: bool
    motivo: str = ''


MODOS_TEMPERATURA = ('variedade', 'preparacao')


def temperatura_de_populacoes(valor, frequencia_Hz, modo='variedade'):
    """Temperatura efetiva de Boltzmann

    modo 'variedade': valor = p_ge/p_fh e frequencia = ω_ef/2π
    modo 'preparacao': valor = P (população do alvo) e frequencia = ω_ge/2π
    """
    if modo not in MODOS_TEMPERATURA:
        raise ErroParametro(f"Modo desconhecido: {modo}")
    if not frequencia_Hz > 0:
        raise ErroParametro("Frequência deve ser positiva")
    if modo == 'preparacao':
        if not 0 < valor < 1:
            raise ErroParametro(f"Probabilidade fora de (0, 1): {valor}")
        razao = valor / (1 - valor)
    else:
        if not valor > 0:
            raise ErroParametro(f"Razão de populações deve ser positiva: {valor}")
        razao = valor

    energia = CONSTANTES.planck * frequencia_Hz
    if razao == 1:
        logger.warning("Populações iguais: temperatura infinita")
        return EstimativaTemperatura(math.inf, frequencia_Hz, razao, False, 'temperatura infinita')
    if razao < 1:
        logger.warning("Inversão de população (razão %.4g): temperatura negativa", razao)
        return EstimativaTemperatura(math.nan, frequencia_Hz, razao, False, 'inversão de população')
    temperatura = energia / (CONSTANTES.boltzmann * math.log(razao))
    return EstimativaTemperatura(temperatura, frequencia_Hz, razao, True)


def razao_boltzmann(temperatura_K, frequencia_Hz):
    """Razão de populações e^{hf/k_B T} (inversa de temperatura_de_populacoes)"""
    return math.exp(CONSTANTES.planck * frequencia_Hz / (CONSTANTES.boltzmann * temperatura_K))


def ajustar_relaxacao(tempos, p_e_prep_e, p_e_prep_g):
    """T1 por ajuste exponencial conjunto, com taxa 2Γ = 1/T1 e assíntota comuns"""
    t = np.asarray(tempos, dtype=float)
    y_e = np.asarray(p_e_prep_e, dtype=float)
    y_g = np.asarray(p_e_prep_g, dtype=float)
    assintota0 = (y_e[-1] + y_g[-1]) / 2
    fracao = np.clip((y_e - assintota0) / (y_e[0] - assintota0), 1e-6, None)
    metade = max(3, len(t) // 3)
    inclinacao = -np.polyfit(t[:metade], np.log(fracao[:metade]), 1)[0]
    T1_0 = 1 / inclinacao if inclinacao > 0 else t[-1] / 3

    def residuos(x):
        a, b_e, b_g, T1 = x
        decaimento = np.exp(-t / T1)
        return np.concatenate([a + (b_e - a) * decaimento - y_e, a + (b_g - a) * decaimento - y_g])

    resultado = least_squares(residuos, [assintota0, y_e[0], y_g[0], T1_0],
                              bounds=([-np.inf, -np.inf, -np.inf, 0], np.inf), x_scale='jac')
    if not resultado.success:
        raise ErroAjuste(f"Ajuste de T1 não convergiu: {resultado.message}")
    a, b_e, b_g, T1 = resultado.x
    return {'T1': float(T1), 'assintota': float(a), 'inicio_e': float(b_e), 'inicio_g': float(b_g),
            'Gamma': float(1 / (2 * T1))}


def _chute_frequencia(t, y):
    passo = t[1] - t[0]
    M = 8 * len(t)
    espectro = np.fft.rfft(y - y.mean(), n=M)
    frequencias = np.fft.rfftfreq(M, d=passo)
    k = int(np.argmax(np.abs(espectro[1:]))) + 1
    return frequencias[k], float(np.angle(espectro[k]))


def _senoide_amortecida(t, B, A, T2, f, fase):
    return B + A * np.exp(-t / T2) * np.cos(2 * math.pi * f * t + fase)


def ajustar_ramsey(tempos, populacao):
    """T2* e frequência por senoide amortecida, com frequência inicial pela FFT"""
    t = np.asarray(tempos, dtype=float)
    y = np.asarray(populacao, dtype=float)
    f0, fase0 = _chute_frequencia(t, y)
    B0, A0 = y.mean(), (y.max() - y.min()) / 2
    melhor = None
    for fase in (fase0, 0.0, math.pi / 2, math.pi, 3 * math.pi / 2):
        try:
            parametros, _ = curve_fit(_senoide_amortecida, t, y, p0=[B0, A0, t[-1] / 3, f0, fase],
                                      maxfev=20000)
        except RuntimeError:
            continue
        custo = float(np.sum((_senoide_amortecida(t, *parametros) - y) ** 2))
        if melhor is None or custo < melhor[0]:
            melhor = (custo, parametros)
    if melhor is None:
        raise ErroAjuste("Ajuste de Ramsey não convergiu")
    B, A, T2, f, fase = melhor[1]
    return {'T2_estrela': float(abs(T2)), 'frequencia_Hz': float(abs(f)), 'amplitude': float(abs(A)),
            'deslocamento': float(B)}


def taxa_defasagem(T1, T2_estrela):
    """Γ_φ = 1/T2* − 1/(2T1)"""
    return 1 / T2_estrela - 1 / (2 * T1)


def ajustar_relaxacao_e_ramsey(tempos_t1, p_e_prep_e, p_e_prep_g, tempos_ramsey, ramsey):
    relaxacao = ajustar_relaxacao(tempos_t1, p_e_prep_e, p_e_prep_g)
    coerencia = ajustar_ramsey(tempos_ramsey, ramsey)
    return {
        'T1': relaxacao['T1'],
        'T2_estrela': coerencia['T2_estrela'],
        'frequencia_Hz': coerencia['frequencia_Hz'],
        'Gamma_phi': taxa_defasagem(relaxacao['T1'], coerencia['T2_estrela']),
    }


def taxa_termica(temperatura_K, Gamma_ref, temperatura_ref_K):
    """Γ ∝ n_th ∝ T no limite n_th ≫ 1"""
    return Gamma_ref * temperatura_K / temperatura_ref_K


def ajustar_oscilacao_rabi(tempos, populacao, omega_chute):
    """Frequência angular de p(t) = A − B cos(Ωt)"""
    t = np.asarray(tempos, dtype=float)
    y = np.asarray(populacao, dtype=float)

    def modelo(tt, A, B, Omega):
        return A - B * np.cos(Omega * tt)

    try:
        parametros, _ = curve_fit(modelo, t, y, p0=[0.5, 0.5, omega_chute], maxfev=20000)
    except RuntimeError as e:
        raise ErroAjuste(f"Ajuste da oscilação de Rabi falhou: {e}") from e
    return float(abs(parametros[2]))
