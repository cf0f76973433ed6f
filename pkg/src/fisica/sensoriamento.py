"""Protocolo cíclico preparar–interrogar–medir e o analisador de espectro de carga."""
import logging
import math
import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
import pandas as pd
from scipy.optimize import minimize_scalar
from scipy.special import sici

from fisica.dinamica import DissipacaoQubit, bloch_forma_fechada, frequencia_rabi
from fisica.erros import ErroCalibracao, ErroEntrada, ErroModelo, ErroParametro

logger = logging.getLogger(__name__)

# Fração da potência de sinc² no lóbulo principal: (2/π)·Si(2π) ≈ 0.903
FRACAO_LOBULO = 2 / math.pi * sici(2 * math.pi)[0]

SNR_MINIMA = 3.0

MAGICO_REGISTRO = b"FX"
CABECALHO_REGISTRO = struct.Struct("<2sHI")

# i^k para k mod 4
_FASES_EIXO = np.array([1, 1j, -1, -1j])

_JANELAS_POR_BLOCO = 256


@dataclass(frozen=True)
class ConfiguracaoProtocolo:
    tau_I: float
    tau_prep: float = 13e-6
    N: int = 1000
    N_p: int = 5
    n_janelas: int = 100
    escala_leitura: float = 0.84
    semente: int = 0

    def __post_init__(self):
        if not (self.tau_I > 0 and self.tau_prep > 0):
            raise ErroParametro("tau_I e tau_prep devem ser positivos")
        if self.N <= 0 or self.N % 2:
            raise ErroParametro(f"N deve ser par e positivo (recebido {self.N})")
        if self.N_p < 1 or self.n_janelas < 1:
            raise ErroParametro("N_p e n_janelas devem ser >= 1")
        if not 0 < self.escala_leitura <= 1:
            raise ErroParametro("escala_leitura deve estar em (0, 1]")

    @property
    def tau(self):
        return self.tau_I + self.tau_prep

    @property
    def omega_nyquist(self):
        return math.pi / self.tau

    @property
    def omega_rbw(self):
        return 2 * math.pi / (self.N * self.tau)

    @property
    def omega_full(self):
        return 2 * math.pi / self.tau_I

    @property
    def passo_bin(self):
        return 2 * math.pi / (self.tau * self.N_p * self.N)

    def frequencias_bins(self):
        """Δ_n em rad/s, centradas em [−Ω_Ny, Ω_Ny)"""
        M = self.N_p * self.N
        return np.fft.fftshift(np.fft.fftfreq(M, d=self.tau)) * 2 * math.pi


@dataclass(frozen=True)
class TomCalibracao:
    N_drive: float
    Delta: float        # ω_ge − ω_cal, rad/s
    fase: float = 0.0

    def __post_init__(self):
        if self.N_drive < 0:
            raise ErroParametro("N_drive não pode ser negativo")


@dataclass(frozen=True)
class QubitSensor:
    """Qubit no ponto de operação: ω_ge em rad/s, |⟨e|φ̂|g⟩| e dissipação"""
    omega_ge: float
    phi_eg: float
    dissipacao: DissipacaoQubit

    def omega_rabi(self, tom):
        return frequencia_rabi(tom.N_drive, self.omega_ge, self.phi_eg)


def sigma_zero(cfg, tom, qubit):
    """⟨σ⟩₀ = (sx + i sy)/2 após a interrogação, com a fase do tom"""
    estado = bloch_forma_fechada(qubit.omega_rabi(tom), tom.Delta, qubit.dissipacao.Gamma, cfg.tau_I)
    return complex(estado.transversal) / 2 * np.exp(1j * tom.fase)


def probabilidades_medicao(cfg, sigma0, Delta, indices):
    """⟨m_k⟩ = 1/2 + escala·Re[⟨σ⟩₀ (−i)^k e^{iΔkτ}]"""
    k = np.asarray(indices)
    rotacao = np.conj(_FASES_EIXO[k % 4]) * np.exp(1j * Delta * k * cfg.tau)
    return 0.5 + cfg.escala_leitura * np.real(sigma0 * rotacao)


@dataclass
class RegistroMedicao:
    bits: np.ndarray = field(repr=False)
    N: int
    n_janelas: int

    def __post_init__(self):
        self.bits = np.asarray(self.bits, dtype=np.uint8)
        if self.bits.size != self.N * self.n_janelas:
            raise ErroEntrada(
                f"Registro com {self.bits.size} bits não corresponde a {self.n_janelas} janelas de {self.N}"
            )

    def janelas(self):
        return self.bits.reshape(self.n_janelas, self.N)


def _gerador_janela(semente, janela):
    # fluxo aleatório próprio de cada janela, independente do particionamento em threads
    return np.random.default_rng(np.random.SeedSequence([int(semente), int(janela)]))


def simular_registro(cfg, tom, qubit, threads=1):
    """Sorteia os bits m_k de n_janelas janelas de N disparos"""
    sigma0 = sigma_zero(cfg, tom, qubit)

    def simular_janela(janela):
        k = janela * cfg.N + np.arange(cfg.N)
        p = probabilidades_medicao(cfg, sigma0, tom.Delta, k)
        if np.any(np.abs(p - 0.5) > 0.5 + 1e-12):
            raise ErroModelo(f"⟨m_k⟩ fora de [0, 1] na janela {janela}")
        fora = (p < 0) | (p > 1)
        if np.any(fora):
            logger.warning("Probabilidades de medição recortadas para [0, 1] em %d disparos",
                           int(fora.sum()))
            p = np.clip(p, 0, 1)
        return (_gerador_janela(cfg.semente, janela).random(cfg.N) < p).astype(np.uint8)

    with ThreadPoolExecutor(max_workers=max(1, int(threads))) as executor:
        janelas = list(executor.map(simular_janela, range(cfg.n_janelas)))
    return RegistroMedicao(bits=np.concatenate(janelas), N=cfg.N, n_janelas=cfg.n_janelas)


def telegrafico(registro_ou_bits, k0=0):
    """σ_k = i^k (m_k − 1/2)"""
    bits = getattr(registro_ou_bits, 'bits', registro_ou_bits)
    bits = np.asarray(bits, dtype=float)
    k = k0 + np.arange(bits.size)
    return _FASES_EIXO[k % 4] * (bits - 0.5)


def bits_de_telegrafico(sigma, k0=0):
    """Inversa de telegrafico"""
    k = k0 + np.arange(len(sigma))
    return np.rint(np.real(np.conj(_FASES_EIXO[k % 4]) * np.asarray(sigma)) + 0.5).astype(np.uint8)


@dataclass
class Periodograma:
    S: np.ndarray            # centrado
    frequencias: np.ndarray  # rad/s, centradas


def periodograma(janela, N_p, tau, N=None):
    """S_n = |Σ z_k e^{−2iπkn/(N_p N)}|² da janela preenchida com zeros"""
    janela = np.asarray(janela)
    if janela.ndim != 1 or (N is not None and janela.size != N):
        raise ErroEntrada(f"Janela com {janela.size} amostras, esperado {N}")
    M = int(N_p) * janela.size
    Z = np.fft.fft(janela, n=M)
    frequencias = np.fft.fftshift(np.fft.fftfreq(M, d=tau)) * 2 * math.pi
    return Periodograma(S=np.fft.fftshift(np.abs(Z) ** 2), frequencias=frequencias)


@dataclass
class EstimativaEspectro:
    frequencias: np.ndarray
    S: np.ndarray
    desvio: np.ndarray
    n_janelas: int


def media_bartlett(periodogramas):
    """Média de periodogramas de janelas não sobrepostas"""
    periodogramas = list(periodogramas)
    if not periodogramas:
        raise ErroEntrada("É necessária ao menos uma janela")
    pilha = np.array([p.S for p in periodogramas])
    desvio = pilha.std(axis=0) if len(periodogramas) > 1 else np.zeros(pilha.shape[1])
    return EstimativaEspectro(frequencias=periodogramas[0].frequencias, S=pilha.mean(axis=0),
                              desvio=desvio, n_janelas=len(periodogramas))


def espectro_do_registro(registro, cfg, threads=1):
    """Telegrafo + periodogramas + Bartlett, em blocos de janelas reduzidos em ordem"""
    sigma = telegrafico(registro).reshape(registro.n_janelas, registro.N)
    M = cfg.N_p * registro.N
    blocos = [sigma[i:i + _JANELAS_POR_BLOCO] for i in range(0, registro.n_janelas, _JANELAS_POR_BLOCO)]

    def somar(bloco):
        S = np.abs(np.fft.fft(bloco, n=M, axis=1)) ** 2
        return S.sum(axis=0), (S ** 2).sum(axis=0)

    with ThreadPoolExecutor(max_workers=max(1, int(threads))) as executor:
        parciais = list(executor.map(somar, blocos))
    soma = sum(p[0] for p in parciais)
    soma_quad = sum(p[1] for p in parciais)
    n = registro.n_janelas
    media = soma / n
    variancia = np.clip(soma_quad / n - media ** 2, 0, None)
    return EstimativaEspectro(frequencias=cfg.frequencias_bins(), S=np.fft.fftshift(media),
                              desvio=np.fft.fftshift(np.sqrt(variancia)), n_janelas=n)


def envolver(x, omega_nyquist):
    """Reduz frequências ao intervalo [−Ω_Ny, Ω_Ny)"""
    return np.mod(np.asarray(x) + omega_nyquist, 2 * omega_nyquist) - omega_nyquist


def _soma_geometrica(x, N, tau):
    # Σ_{k<N} e^{i x k τ}
    meio = x * tau / 2
    denominador = np.sin(meio)
    singular = np.abs(denominador) < 1e-12
    with np.errstate(invalid='ignore', divide='ignore'):
        razao = np.sin(N * meio) / np.where(singular, 1.0, denominador)
    valor = np.exp(1j * meio * (N - 1)) * razao
    return np.where(singular, N, valor)


def linha_analitica(sigma0, Delta, cfg):
    """Espectro do sinal nos bins centrados: (exato, aproximação sinc²)

    sigma0 é o ⟨σ⟩₀ efetivo (já multiplicado pela escala de leitura).
    """
    Dn = cfg.frequencias_bins()
    sigma0 = complex(sigma0)
    espelho = cfg.omega_nyquist - Delta
    Z = 0.5 * (sigma0 * _soma_geometrica(Delta - Dn, cfg.N, cfg.tau)
               + np.conj(sigma0) * _soma_geometrica(espelho - Dn, cfg.N, cfg.tau))
    exata = np.abs(Z) ** 2

    pico = (abs(sigma0) * cfg.N / 2) ** 2
    distancia_1 = envolver(Delta - Dn, cfg.omega_nyquist)
    distancia_2 = envolver(espelho - Dn, cfg.omega_nyquist)
    aproximada = pico * (np.sinc(distancia_1 / cfg.omega_rbw) ** 2
                         + np.sinc(distancia_2 / cfg.omega_rbw) ** 2)
    return exata, aproximada


def snr_prevista(cfg, tom, qubit):
    """SNR geral (√N·|σ₀| com f(Δ) e escala) e a forma dentro da banda"""
    sigma0 = cfg.escala_leitura * abs(sigma_zero(cfg, tom, qubit))
    T1 = qubit.dissipacao.T1
    omega_r = qubit.omega_rabi(tom)
    banda = (math.sqrt(cfg.N) * cfg.escala_leitura * math.exp(-cfg.tau_I / T1)
             * omega_r * cfg.tau_I / 2)
    return {'snr_geral': math.sqrt(cfg.N) * sigma0, 'snr_banda': banda}


def _mascara_fora_dos_picos(frequencias, picos, largura, omega_nyquist):
    mascara = np.ones(frequencias.size, dtype=bool)
    for pico in picos:
        mascara &= np.abs(envolver(frequencias - pico, omega_nyquist)) > largura
    return mascara


def snr_medida(estimativa, Delta, cfg):
    """SNR do espectro médio: √((pico − piso)/piso) no bin mais próximo de Δ"""
    frequencias = estimativa.frequencias
    alvo = envolver(Delta, cfg.omega_nyquist)
    indice = int(np.argmin(np.abs(envolver(frequencias - alvo, cfg.omega_nyquist))))
    picos = [alvo, envolver(cfg.omega_nyquist - Delta, cfg.omega_nyquist)]
    piso = estimativa.S[_mascara_fora_dos_picos(frequencias, picos, 3 * cfg.omega_rbw,
                                                cfg.omega_nyquist)].mean()
    return math.sqrt(max(estimativa.S[indice] - piso, 0.0) / piso)


def limiar_significancia(n_bins):
    """3 + √(2 ln M): margem de 3σ acima do máximo esperado de M bins de ruído"""
    return 3 + math.sqrt(2 * math.log(max(n_bins, 2)))


@dataclass
class EspectroCalibrado:
    frequencias: np.ndarray
    S: np.ndarray
    S_ee: np.ndarray           # e²/Hz
    fator: float
    piso_ee: float
    delta_q: float             # e/√Hz
    frequencia_pico: float     # rad/s
    altura_pico_ee: float      # sinal acima do piso, e²/Hz
    snr: float
    significancia: float


def calibrar_espectro(estimativa, tom, cfg):
    """Escala o espectro para ∫pico S_ee dω/2π = (2N_drive)²

    O pico é buscado na banda sem ambiguidade |Δ_n| ≤ Ω_Ny/2; a área do lóbulo
    principal é corrigida pela FRACAO_LOBULO.
    """
    frequencias = estimativa.frequencias
    banda = np.abs(frequencias) <= cfg.omega_nyquist / 2
    indices_banda = np.flatnonzero(banda)
    indice = int(indices_banda[np.argmax(estimativa.S[banda])])
    pico_freq = frequencias[indice]

    espelho = envolver(cfg.omega_nyquist - pico_freq, cfg.omega_nyquist)
    fora = _mascara_fora_dos_picos(frequencias, [pico_freq, espelho], 3 * cfg.omega_rbw,
                                   cfg.omega_nyquist)
    piso = float(estimativa.S[fora].mean())
    sinal = estimativa.S[indice] - piso
    snr = math.sqrt(max(sinal, 0.0) / piso)
    # pico contra a flutuação do piso médio, que cai com √n_janelas
    significancia = sinal / piso * math.sqrt(estimativa.n_janelas)
    if snr < SNR_MINIMA:
        raise ErroCalibracao(f"Pico de calibração não resolvido (SNR {snr:.2f} < {SNR_MINIMA:g})")
    limiar = limiar_significancia(indices_banda.size)
    if significancia < limiar:
        raise ErroCalibracao(
            f"Pico de calibração não resolvido (significância {significancia:.2f} < {limiar:.2f})"
        )

    lobulo = np.abs(envolver(frequencias - pico_freq, cfg.omega_nyquist)) <= cfg.omega_rbw
    area = float(np.sum(estimativa.S[lobulo] - piso) * cfg.passo_bin / (2 * math.pi))
    area_total = area / FRACAO_LOBULO
    if area_total <= 0:
        raise ErroCalibracao("Área do pico de calibração não positiva")
    fator = (2 * tom.N_drive) ** 2 / area_total
    piso_ee = fator * piso
    return EspectroCalibrado(
        frequencias=frequencias,
        S=estimativa.S,
        S_ee=fator * estimativa.S,
        fator=fator,
        piso_ee=piso_ee,
        delta_q=math.sqrt(piso_ee),
        frequencia_pico=float(pico_freq),
        altura_pico_ee=fator * sinal,
        snr=snr,
        significancia=significancia,
    )


CENARIOS = ('ideal', 'fixo')


@dataclass
class CurvaSensibilidade:
    taus_I: np.ndarray
    delta_q: np.ndarray     # e/√Hz
    cenario: str
    T1: float
    tau_otimo: float
    delta_q_minimo: float


def sensibilidade(tau_I, T1, omega_ge, cenario='ideal', tau_prep=0.0, phi_eg=math.pi):
    """δq(τ_I) em e/√Hz: δq² = 4τ/(τ_I² ω_ge² |φ_eg|² e^{−2τ_I/T1})"""
    if cenario not in CENARIOS:
        raise ErroParametro(f"Cenário desconhecido: {cenario}")
    tau_I = np.asarray(tau_I, dtype=float)
    tau = tau_I if cenario == 'ideal' else tau_I + tau_prep
    dq2 = 4 * tau / (tau_I ** 2 * omega_ge ** 2 * phi_eg ** 2 * np.exp(-2 * tau_I / T1))
    return np.sqrt(dq2)


def curva_sensibilidade(T1, omega_ge, cenario='ideal', tau_prep=13e-6, taus_I=None,
                        phi_eg=math.pi):
    """Curva δq(τ_I) e seu mínimo por seção áurea (empates para o menor τ_I)"""
    if not T1 > 0:
        raise ErroParametro("T1 deve ser positivo")
    if taus_I is None:
        taus_I = np.linspace(0.02, 4.0, 400) * T1
    taus_I = np.asarray(taus_I, dtype=float)
    curva = sensibilidade(taus_I, T1, omega_ge, cenario, tau_prep, phi_eg)

    def objetivo(x):
        # log δq² em função de x = τ_I/T1
        tau_I = x * T1
        tau = tau_I if cenario == 'ideal' else tau_I + tau_prep
        return math.log(tau / T1) - 2 * math.log(x) + 2 * x

    grade = np.linspace(0.01, 5.0, 500)
    valores = [objetivo(x) for x in grade]
    i = int(np.argmin(valores))
    i = min(max(i, 1), len(grade) - 2)
    resultado = minimize_scalar(objetivo, bracket=(grade[i - 1], grade[i], grade[i + 1]),
                                method='golden', tol=1e-12)
    tau_otimo = float(resultado.x) * T1
    dq_min = float(sensibilidade(tau_otimo, T1, omega_ge, cenario, tau_prep, phi_eg))
    return CurvaSensibilidade(taus_I=taus_I, delta_q=curva, cenario=cenario, T1=T1,
                              tau_otimo=tau_otimo, delta_q_minimo=dq_min)


def sensibilidade_otima_ideal(T1, omega_ge, phi_eg=math.pi):
    """(τ_I*, δq_min) fechados: T1/2 e √(8e/(T1 ω² |φ_eg|²))"""
    return T1 / 2, math.sqrt(8 * math.e / (T1 * omega_ge ** 2 * phi_eg ** 2))


def loci_aliasing(Delta, cfg):
    """Posições previstas dos dois picos: Δ e Ω_Ny − Δ, módulo 2Ω_Ny"""
    return (float(envolver(Delta, cfg.omega_nyquist)),
            float(envolver(cfg.omega_nyquist - Delta, cfg.omega_nyquist)))


def _dois_maiores_picos(estimativa, cfg):
    S = estimativa.S.copy()
    primeiro = int(np.argmax(S))
    raio = 2 * cfg.N_p
    indices = (primeiro + np.arange(-raio, raio + 1)) % S.size
    S[indices] = -np.inf
    segundo = int(np.argmax(S))
    return estimativa.frequencias[primeiro], estimativa.frequencias[segundo]


def mapa_aliasing(cfg, deltas, qubit, N_drive, threads=1):
    """Picos previstos e simulados do espectrograma para cada Δ (rad/s)"""
    linhas = []
    for Delta in deltas:
        tom = TomCalibracao(N_drive=N_drive, Delta=float(Delta))
        registro = simular_registro(cfg, tom, qubit, threads)
        estimativa = espectro_do_registro(registro, cfg, threads)
        previsto_1, previsto_2 = loci_aliasing(Delta, cfg)
        pico_a, pico_b = _dois_maiores_picos(estimativa, cfg)

        def distancia(a, b):
            return abs(float(envolver(a - b, cfg.omega_nyquist)))

        # associa cada pico simulado ao locus previsto mais próximo
        if distancia(pico_a, previsto_1) + distancia(pico_b, previsto_2) > \
                distancia(pico_b, previsto_1) + distancia(pico_a, previsto_2):
            pico_a, pico_b = pico_b, pico_a
        linhas.append({
            'Delta_rad_s': float(Delta),
            'previsto_1_rad_s': previsto_1,
            'previsto_2_rad_s': previsto_2,
            'simulado_1_rad_s': float(pico_a),
            'simulado_2_rad_s': float(pico_b),
            'erro_1_bins': distancia(pico_a, previsto_1) / cfg.passo_bin,
            'erro_2_bins': distancia(pico_b, previsto_2) / cfg.passo_bin,
        })
    return pd.DataFrame(linhas)


def gravar_registro_binario(registro, caminho):
    """Cabeçalho de 8 bytes (mágico, N, n_janelas) seguido dos bits empacotados"""
    if registro.N > 0xFFFF:
        raise ErroEntrada("N acima de 65535 não cabe no cabeçalho")
    with open(caminho, 'wb') as arquivo:
        arquivo.write(CABECALHO_REGISTRO.pack(MAGICO_REGISTRO, registro.N, registro.n_janelas))
        arquivo.write(np.packbits(registro.bits).tobytes())


def ler_registro_binario(caminho):
    with open(caminho, 'rb') as arquivo:
        cabecalho = arquivo.read(CABECALHO_REGISTRO.size)
        if len(cabecalho) != CABECALHO_REGISTRO.size:
            raise ErroEntrada("Arquivo de registro truncado")
        magico, N, n_janelas = CABECALHO_REGISTRO.unpack(cabecalho)
        if magico != MAGICO_REGISTRO:
            raise ErroEntrada(f"Assinatura inválida: {magico!r}")
        dados = np.frombuffer(arquivo.read(), dtype=np.uint8)
    bits = np.unpackbits(dados)[:N * n_janelas]
    return RegistroMedicao(bits=bits, N=N, n_janelas=n_janelas)
