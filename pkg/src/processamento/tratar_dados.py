"""Converte a configuração normalizada nos objetos tipados dos módulos de física."""
import math

import numpy as np

from fisica.circuito import ConfiguracaoBase, ParametrosCircuito
from fisica.constantes import CONSTANTES
from fisica.dinamica import DissipacaoQubit, ParametrosCavidade
from fisica.erros import ErroParametro
from fisica.eletromecanica import ParametrosMembrana
from fisica.sensoriamento import ConfiguracaoProtocolo, QubitSensor, TomCalibracao


def parametros_circuito(config):
    c = config['circuito']
    return ParametrosCircuito(
        E_J_Hz=c['E_J_Hz'],
        E_C_Hz=c['E_C_Hz'],
        E_L_Hz=c['E_L_Hz'],
        E_JA_Hz=c['E_JA_Hz'],
        E_p_Hz=c['E_p_Hz'],
        n_juncoes_array=c['n_juncoes_array'],
    )


def base_circuito(config):
    return ConfiguracaoBase(dimensao=config['circuito']['dimensao'])


def parametros_cavidade(config):
    c = config['cavidade']
    return ParametrosCavidade(omega_R_Hz=c['omega_R_Hz'], kappa_Hz=c['kappa_Hz'],
                              phi_zpf_R=c['phi_zpf_R'])


def dissipacao_qubit(config):
    d = config['dissipacao']
    return DissipacaoQubit.de_T1(d['T1_s'], d['Gamma_phi_1_s'])


def grade_fluxo(inicio_phi0, fim_phi0, pontos):
    """Grade uniforme de φ_ext em rad a partir de limites em Φ0"""
    return CONSTANTES.phi0_para_rad(np.linspace(inicio_phi0, fim_phi0, int(pontos)))


def fluxos_varredura(config):
    v = config['varredura']
    return grade_fluxo(v['fluxo_inicio_phi0'], v['fluxo_fim_phi0'], v['pontos'])


def configuracao_protocolo(config):
    p = config['protocolo']
    return ConfiguracaoProtocolo(
        tau_I=p['tau_I_s'],
        tau_prep=p['tau_prep_s'],
        N=p['N'],
        N_p=p['N_p'],
        n_janelas=p['n_janelas'],
        escala_leitura=p['escala_leitura'],
        semente=config['execucao']['semente'],
    )


def tom_calibracao(config, protocolo):
    """Tom do arquivo; sem Delta_Hz usa Ω_Ny/4"""
    t = config['tom']
    if t['Delta_Hz'] is None:
        Delta = protocolo.omega_nyquist / 4
    else:
        Delta = CONSTANTES.hz_para_rad(t['Delta_Hz'])
    return TomCalibracao(N_drive=t['N_drive'], Delta=Delta, fase=t['fase_rad'])


def qubit_sensor(config, omega_ge=None, phi_eg=None):
    """Ponto de operação; valores ausentes no arquivo vêm dos argumentos (circuito resolvido)"""
    p = config['protocolo']
    if p['f_ge_Hz'] is not None:
        omega_ge = CONSTANTES.hz_para_rad(p['f_ge_Hz'])
    if p['phi_eg'] is not None:
        phi_eg = p['phi_eg']
    if omega_ge is None or phi_eg is None:
        raise ErroParametro("omega_ge e phi_eg precisam vir da configuração ou do circuito")
    return QubitSensor(omega_ge=omega_ge, phi_eg=abs(phi_eg), dissipacao=dissipacao_qubit(config))


def parametros_membrana(config):
    m = config['membrana']
    return ParametrosMembrana(
        lado=m['lado_m'],
        tensao_mecanica=m['tensao_mecanica_Pa'],
        Omega_m_Hz=m['Omega_m_Hz'],
        massa=m['massa_kg'],
        densidade=m['densidade_kg_m3'],
        gap=m['gap_m'],
        area=m['area_m2'],
        capacitancia=m['capacitancia_F'],
        V_g=m['V_g_V'],
        x_zpf=m['x_zpf_m'],
    )


def dessintonias_resfriamento(config):
    r = config['resfriamento']
    return CONSTANTES.hz_para_rad(np.linspace(r['dessintonia_min_Hz'], r['dessintonia_max_Hz'],
                                              r['pontos_dessintonia']))


def agenda_rampa(config):
    """Rampa linear do ponto de resfriamento de volta a π"""
    r = config['resfriamento']
    return [(0.0, CONSTANTES.phi0_para_rad(r['fluxo_phi0'])), (r['duracao_rampa_s'], math.pi)]
