"""Comando cool: taxas de resfriamento por sideband, validação contra o modelo completo e rampa."""
import logging

import pandas as pd

from comandos.comum import resolver_ponto
from fisica.constantes import CONSTANTES
from fisica.dinamica import (comparar_resfriamento_sideband, evoluir_rampa_fluxo, mapa_resfriamento,
                             populacao_estacionaria, taxas_perda_efetivas, tempo_preparacao)
from processamento.tratar_dados import (agenda_rampa, base_circuito, dessintonias_resfriamento,
                                        dissipacao_qubit, grade_fluxo, parametros_cavidade,
                                        parametros_circuito)

logger = logging.getLogger(__name__)


def _resumo_sideband(relatorio, dissipacao, alvo):
    taxa = relatorio.taxa_menos if alvo == 'g' else relatorio.taxa_mais
    constante, fidelidade = tempo_preparacao(taxa, dissipacao.Gamma)
    return {
        'alvo': alvo,
        'delta_R_rad_s': relatorio.delta_R,
        'taxa_mais_1_s': relatorio.taxa_mais,
        'taxa_menos_1_s': relatorio.taxa_menos,
        'tempo_preparacao_s': constante,
        'fidelidade_estacionaria': fidelidade,
        'sigma_z_estacionario': populacao_estacionaria(relatorio.taxa_mais, relatorio.taxa_menos,
                                                       dissipacao.Gamma),
    }


def executar(config, threads=1):
    r = config['resfriamento']
    params = parametros_circuito(config)
    base = base_circuito(config)
    cavidade = parametros_cavidade(config)
    dissipacao = dissipacao_qubit(config)

    phi_c = CONSTANTES.phi0_para_rad(r['fluxo_phi0'])
    sol, elementos = resolver_ponto(config, phi_c)
    omega_ge = float(sol.energias[1] - sol.energias[0])
    g = cavidade.g(params.E_J_Hz)
    abs_alfa = CONSTANTES.hz_para_rad(r['g_alfa_Hz']) / g
    logger.info("Resfriamento em φ_ext=%.6f rad: ω_ge/2π=%.4g Hz, |c_x|=%.4g", phi_c,
                CONSTANTES.rad_para_hz(omega_ge), abs(elementos.cx))

    para_g = taxas_perda_efetivas(elementos, g, abs_alfa, cavidade.kappa, -omega_ge, omega_ge)
    para_e = taxas_perda_efetivas(elementos, g, abs_alfa, cavidade.kappa, omega_ge, omega_ge)
    resumo = {
        'phi_ext_rad': phi_c,
        'omega_ge_rad_s': omega_ge,
        'abs_cx': abs(elementos.cx),
        'g_rad_s': g,
        'abs_alfa': abs_alfa,
        'acoplamento_rad_s': para_g.acoplamento,
        'epsilon': para_g.epsilon,
        'kappa_domina': para_g.kappa_domina,
        'razao_sideband': para_g.razao_sideband,
        'sideband_resolvido': para_g.sideband_resolvido,
        'sidebands': [_resumo_sideband(para_g, dissipacao, 'g'),
                      _resumo_sideband(para_e, dissipacao, 'e')],
    }
    resultados = {}

    if r['comparar']:
        comparacao = comparar_resfriamento_sideband(para_g, dissipacao=dissipacao,
                                                    n_cavidade=r['n_cavidade'], rwa=r['rwa'])
        resumo['comparacao'] = {
            'taxa_completa_1_s': comparacao.taxa_completa,
            'taxa_efetiva_1_s': comparacao.taxa_efetiva,
            'erro_relativo': comparacao.erro_relativo,
            'rwa': r['rwa'],
            'avisos': comparacao.avisos,
        }
        resultados['comparacao_resfriamento.csv'] = pd.DataFrame({
            't_s': comparacao.tempos,
            'p_e_completa': comparacao.populacao_completa,
            'p_e_efetiva': comparacao.populacao_efetiva,
        })

    fluxos_mapa = grade_fluxo(r['fluxo_mapa_inicio_phi0'], r['fluxo_mapa_fim_phi0'],
                              r['pontos_fluxo_mapa'])
    resultados['mapa_resfriamento.csv'] = mapa_resfriamento(
        params, cavidade, fluxos_mapa, dessintonias_resfriamento(config), abs_alfa, dissipacao,
        base, threads)

    rampa = evoluir_rampa_fluxo(params, agenda_rampa(config), base, dissipacao=dissipacao,
                                n_pontos=r['pontos_rampa'])
    resumo['rampa'] = {'duracao_s': r['duracao_rampa_s'], 'fidelidade_final': rampa.fidelidade_final}
    resultados['rampa.csv'] = pd.DataFrame({'t_s': rampa.tempos, 'phi_ext_rad': rampa.fluxos,
                                            'fidelidade': rampa.fidelidade})
    resultados['resumo_resfriamento.json'] = resumo
    return resultados
