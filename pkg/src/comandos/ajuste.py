"""Comando fitdemo: dados sintéticos com parâmetros conhecidos e a recuperação pelos ajustes."""
import logging
import math

import numpy as np
import pandas as pd

from comandos.comum import qubit_no_ponto_operacao
from fisica.ajustes import (PG_PREP_TERMICO, ModeloLeitura, ajustar_curvas_rabi,
                            ajustar_histograma_termico, ajustar_relaxacao_e_ramsey, fracao_esquerda,
                            modelo_curvas_rabi, razao_boltzmann, sintetizar_iq, taxa_termica,
                            temperatura_de_populacoes)
from fisica.constantes import CONSTANTES

logger = logging.getLogger(__name__)

# nuvens em I: g e e coincidem (leitura não distingue), f e h separadas
CENTROS_IQ = {'g': (-2.0, 0.0), 'e': (-2.0, 0.0), 'f': (1.0, 0.5), 'h': (3.0, -0.5)}


def _amostrar(rng, probabilidades, n_disparos):
    return rng.binomial(n_disparos, np.clip(probabilidades, 0, 1)) / n_disparos


def curvas_rabi_sinteticas(a, rng):
    theta = np.linspace(0.0, 2 * math.pi, a['pontos_theta'])
    preparacoes = {'g': a['Pg_prep_g'], 'e': a['Pg_prep_e'], 'th': PG_PREP_TERMICO}
    curvas = {
        j: _amostrar(rng, modelo_curvas_rabi(theta, Pg, a['P_esq_g'], a['P_esq_e'], a['P_esq_h']),
                     a['n_disparos'])
        for j, Pg in preparacoes.items()
    }
    return theta, curvas


def populacoes_termicas(temperatura_K, f_ef_Hz):
    """g/e e f/h igualmente povoados, com p_ge/p_fh dado por Boltzmann em ω_ef"""
    razao = razao_boltzmann(temperatura_K, f_ef_Hz)
    p_fh = 1 / (1 + razao)
    return {'g': (1 - p_fh) / 2, 'e': (1 - p_fh) / 2, 'f': p_fh / 2, 'h': p_fh / 2}


def executar(config, threads=1):
    a = config['ajuste']
    semente = config['execucao']['semente']
    T1 = config['dissipacao']['T1_s']
    qubit = qubit_no_ponto_operacao(config)
    f_ge = CONSTANTES.rad_para_hz(qubit.omega_ge)
    rng_curvas, rng_iq, rng_t1, rng_ramsey = [np.random.default_rng(s)
                                              for s in np.random.SeedSequence(semente).spawn(4)]

    # fidelidade de preparação
    theta, curvas = curvas_rabi_sinteticas(a, rng_curvas)
    preparacao = ajustar_curvas_rabi(theta, curvas, a['n_bootstrap'], semente, threads)
    temperatura_prep = temperatura_de_populacoes(preparacao.parametros['Pg_prep_g'], f_ge,
                                                 modo='preparacao')
    tabela_curvas = pd.DataFrame({
        'theta_rad': theta,
        'P_esq_prep_g': curvas['g'],
        'P_esq_prep_e': curvas['e'],
        'P_esq_prep_th': curvas['th'],
    })

    # temperatura da variedade f/h
    modelo = ModeloLeitura(centros=CENTROS_IQ, sigma=a['sigma_nuvem'])
    iq = sintetizar_iq(populacoes_termicas(a['temperatura_ef_K'], a['f_ef_Hz']), modelo,
                       a['n_disparos_histograma'], rng_iq)
    histograma = ajustar_histograma_termico(
        iq['I'].to_numpy(), a['sigma_nuvem'],
        centros=(CENTROS_IQ['g'][0], CENTROS_IQ['f'][0], CENTROS_IQ['h'][0]))
    temperatura_ef = temperatura_de_populacoes(histograma.p_ge / histograma.p_fh, a['f_ef_Hz'])
    tabela_histograma = pd.DataFrame({
        'I_inicio': histograma.bordas[:-1],
        'I_fim': histograma.bordas[1:],
        'contagens': histograma.contagens,
    })

    # T1 e Ramsey
    t_t1 = np.linspace(0.0, 5 * T1, a['pontos_tempo'])
    decaimento = np.exp(-t_t1 / T1)
    p_e_prep_e = _amostrar(rng_t1, 0.5 + (0.5 - a['Pg_prep_e']) * decaimento, a['n_disparos'])
    p_e_prep_g = _amostrar(rng_t1, 0.5 + (0.5 - a['Pg_prep_g']) * decaimento, a['n_disparos'])
    t_ramsey = np.linspace(0.0, 4 * a['T2_estrela_s'], a['pontos_tempo'])
    ramsey_ideal = 0.5 + 0.5 * np.exp(-t_ramsey / a['T2_estrela_s']) * np.cos(
        2 * math.pi * a['f_ramsey_Hz'] * t_ramsey)
    ramsey = _amostrar(rng_ramsey, ramsey_ideal, a['n_disparos'])
    coerencia = ajustar_relaxacao_e_ramsey(t_t1, p_e_prep_e, p_e_prep_g, t_ramsey, ramsey)

    Gamma = 1 / (2 * coerencia['T1'])
    referencia = temperatura_ef.temperatura_K if temperatura_ef.valida else a['temperatura_ef_K']
    temperaturas = np.asarray(a['temperaturas_K'])
    tabela_termica = pd.DataFrame({
        'temperatura_K': temperaturas,
        'Gamma_1_s': taxa_termica(temperaturas, Gamma, referencia),
    })

    resumo = {
        'preparacao': {
            'parametros': preparacao.parametros,
            'media_bootstrap': preparacao.media,
            'desvio_bootstrap': preparacao.desvio,
            'plantados': {nome: a[nome] for nome in preparacao.parametros},
            'na_fronteira': preparacao.na_fronteira,
            'n_reamostragens': preparacao.n_reamostragens,
            'temperatura_prep_K': temperatura_prep.temperatura_K,
            'temperatura_prep_valida': temperatura_prep.valida,
            'f_ge_Hz': f_ge,
        },
        'histograma': {
            'p_ge': histograma.p_ge,
            'p_fh': histograma.p_fh,
            'desvio_p_fh': histograma.desvio_p_fh,
            'degenerado': histograma.degenerado,
            'fracao_esquerda': fracao_esquerda(iq),
            'P_esq_modelo': {e: modelo.prob_esquerda(e) for e in CENTROS_IQ},
            'temperatura_ef_K': temperatura_ef.temperatura_K,
            'temperatura_ef_valida': temperatura_ef.valida,
            'temperatura_ef_plantada_K': a['temperatura_ef_K'],
        },
        'coerencia': {
            **coerencia,
            'T1_plantado_s': T1,
            'T2_estrela_plantado_s': a['T2_estrela_s'],
        },
    }
    logger.info("Ajustes: Pg_prep_g=%.4f, T1=%.3g s, T2*=%.3g s", preparacao.parametros['Pg_prep_g'],
                coerencia['T1'], coerencia['T2_estrela'])
    return {
        'curvas_rabi.csv': tabela_curvas,
        'histograma.csv': tabela_histograma,
        'relaxacao.csv': pd.DataFrame({'t_s': t_t1, 'p_e_prep_e': p_e_prep_e, 'p_e_prep_g': p_e_prep_g}),
        'ramsey.csv': pd.DataFrame({'t_s': t_ramsey, 'p_e': ramsey}),
        'taxa_termica.csv': tabela_termica,
        'resumo_ajustes.json': resumo,
    }
